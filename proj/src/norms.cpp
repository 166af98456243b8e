#include "pfem/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pfem {

namespace {

// Integrates |v_h - w|^2 and |grad (v_h - w)|^2 where v_h is the discrete
// field and w is supplied per quadrature point by `reference`.
template <class Reference>
ErrorPair integrate_error(const LagrangeSpace& space, int components, std::span<const double> values,
                          int quadrature_degree, Reference&& reference) {
    const auto& mesh = space.mesh();
    const int dim = mesh.dim;
    const auto nc = static_cast<std::size_t>(components);
    const std::size_t ndof = space.dof_count();
    if (values.size() != nc * ndof) {
        throw std::invalid_argument("error_norms: value vector does not match the space");
    }
    const int degree = quadrature_degree > 0 ? quadrature_degree : 2 * space.degree() + 4;
    const QuadratureRule rule = quadrature(dim, degree);
    const std::size_t nloc = space.dofs_per_cell();
    std::vector<double> phi(nloc);
    std::vector<Point> dphi_ref(nloc);
    std::vector<double> ref_value(nc), ref_grad(3 * nc);

    double l2 = 0.0, semi = 0.0;
    for (std::size_t cell = 0; cell < mesh.cell_count(); ++cell) {
        const auto geo = element_geometry(mesh, cell);
        const auto dofs = space.cell_dofs(cell);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * geo.det_jacobian;
            const Point x = geo.map(rule.points[q]);
            space.element().shape_values(rule.points[q], phi.data());
            space.element().shape_gradients(rule.points[q], dphi_ref.data());
            reference(cell, q, x, ref_value, ref_grad);
            for (std::size_t c = 0; c < nc; ++c) {
                double u = 0.0;
                Point g{};
                for (std::size_t i = 0; i < nloc; ++i) {
                    const double ui = values[c * ndof + dofs[i]];
                    u += ui * phi[i];
                    const Point gi = geo.push_gradient(dphi_ref[i]);
                    for (int d = 0; d < dim; ++d) {
                        g[d] += ui * gi[d];
                    }
                }
                const double e = u - ref_value[c];
                l2 += w * e * e;
                for (int d = 0; d < dim; ++d) {
                    const double ed = g[d] - ref_grad[3 * c + d];
                    semi += w * ed * ed;
                }
            }
        }
    }
    return {std::sqrt(l2), std::sqrt(l2 + semi)};
}

}  // namespace

ErrorPair error_norms(const ProblemSpec& spec, const LagrangeSpace& space, std::span<const double> values,
                      double t, int quadrature_degree) {
    return integrate_error(space, spec.components, values, quadrature_degree,
                           [&](std::size_t, std::size_t, const Point& x, std::vector<double>& value,
                               std::vector<double>& grad) {
                               const auto ex = exact_derivatives(spec, x, t);
                               std::copy_n(ex.value.begin(), value.size(), value.begin());
                               std::copy_n(ex.gradient.begin(), grad.size(), grad.begin());
                           });
}

ErrorPair discrete_distance(const LagrangeSpace& space, int components, std::span<const double> a,
                            std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("discrete_distance: size mismatch");
    }
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff[i] = a[i] - b[i];
    }
    return integrate_error(space, components, diff, 0,
                           [](std::size_t, std::size_t, const Point&, std::vector<double>& value,
                              std::vector<double>& grad) {
                               std::fill(value.begin(), value.end(), 0.0);
                               std::fill(grad.begin(), grad.end(), 0.0);
                           });
}

double observed_rate(double h_coarse, double e_coarse, double h_fine, double e_fine) {
    if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
        throw std::domain_error("observed_rate: errors must be positive");
    }
    if (!(h_coarse > h_fine) || !(h_fine > 0.0)) {
        throw std::domain_error("observed_rate: need h_coarse > h_fine > 0");
    }
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

}  // namespace pfem
