#include "pfem/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pfem/errors.hpp"

namespace pfem {

struct Discretization::CellFrame {
    std::span<const std::size_t> dofs;
    ElementGeometry geometry;
    std::vector<double> local;  // [c * nloc + i]
    std::vector<Point> dphi;    // [q * nloc + i], physical gradients
};

namespace {

std::string format_point(int dim, const Point& x) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (int d = 0; d < dim; ++d) {
        os << (d ? ", " : "") << x[d];
    }
    os << ')';
    return os.str();
}

}  // namespace

Discretization::Discretization(const ProblemSpec& spec, const Mesh& mesh, int degree, SchemeOptions options)
    : spec_(&spec),
      mesh_(&mesh),
      options_(options),
      space_(mesh, degree),
      rule_(quadrature(mesh.dim, 2 * degree + 2)) {
    if (spec.dim != mesh.dim) {
        throw std::invalid_argument("Discretization: problem dimension " + std::to_string(spec.dim) +
                                    " does not match mesh dimension " + std::to_string(mesh.dim));
    }
    if (spec.components < 1 || spec.components > kMaxComponents) {
        throw std::invalid_argument("Discretization: problem needs 1 to 3 components");
    }
    const std::size_t nloc = space_.dofs_per_cell();
    const std::size_t nq = rule_.size();
    phi_.resize(nq * nloc);
    dphi_ref_.resize(nq * nloc);
    for (std::size_t q = 0; q < nq; ++q) {
        space_.element().shape_values(rule_.points[q], phi_.data() + q * nloc);
        space_.element().shape_gradients(rule_.points[q], dphi_ref_.data() + q * nloc);
    }

    std::vector<std::vector<std::size_t>> rows(space_.dof_count());
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const auto dofs = space_.cell_dofs(c);
        for (auto i : dofs) {
            rows[i].insert(rows[i].end(), dofs.begin(), dofs.end());
        }
    }
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    pattern_ = CsrMatrix::from_pattern(rows);

    cell_positions_.resize(mesh.cell_count() * nloc * nloc);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const auto dofs = space_.cell_dofs(c);
        for (std::size_t i = 0; i < nloc; ++i) {
            for (std::size_t j = 0; j < nloc; ++j) {
                cell_positions_[(c * nloc + i) * nloc + j] = pattern_.position(dofs[i], dofs[j]);
            }
        }
    }

    mass_ = pattern_;
    auto& mass_values = mass_.values();
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const double det = element_geometry(mesh, c).det_jacobian;
        for (std::size_t q = 0; q < nq; ++q) {
            const double w = rule_.weights[q] * det;
            const double* phi = phi_.data() + q * nloc;
            for (std::size_t i = 0; i < nloc; ++i) {
                for (std::size_t j = 0; j < nloc; ++j) {
                    mass_values[cell_positions_[(c * nloc + i) * nloc + j]] += w * phi[i] * phi[j];
                }
            }
        }
    }
}

void Discretization::load_cell(std::size_t cell, std::span<const double> values, CellFrame& frame) const {
    const std::size_t nloc = space_.dofs_per_cell();
    const std::size_t ndof = space_.dof_count();
    const std::size_t nq = rule_.size();
    frame.dofs = space_.cell_dofs(cell);
    frame.geometry = element_geometry(*mesh_, cell);
    frame.local.resize(static_cast<std::size_t>(spec_->components) * nloc);
    for (int c = 0; c < spec_->components; ++c) {
        for (std::size_t i = 0; i < nloc; ++i) {
            frame.local[c * nloc + i] = values[c * ndof + frame.dofs[i]];
        }
    }
    frame.dphi.resize(nq * nloc);
    for (std::size_t k = 0; k < nq * nloc; ++k) {
        frame.dphi[k] = frame.geometry.push_gradient(dphi_ref_[k]);
    }
}

std::vector<DirichletConstraint> Discretization::boundary_constraints(int component, double t) const {
    std::vector<DirichletConstraint> constraints;
    const auto& bdofs = space_.boundary_dofs();
    constraints.reserve(bdofs.size());
    std::vector<double> u(static_cast<std::size_t>(spec_->components));
    for (auto dof : bdofs) {
        double value = 0.0;
        if (spec_->boundary == BoundaryKind::exact_trace) {
            spec_->exact.value(space_.dof_points()[dof], t, u);
            value = u[static_cast<std::size_t>(component)];
        }
        constraints.push_back({dof, value});
    }
    return constraints;
}

DiscreteState Discretization::make_state(std::vector<double> values, double tau) const {
    if (values.size() != dof_count() * static_cast<std::size_t>(components())) {
        throw std::invalid_argument("Discretization::make_state: expected " +
                                    std::to_string(dof_count() * components()) + " values, got " +
                                    std::to_string(values.size()));
    }
    DiscreteState state;
    state.tau = tau;
    state.values = std::move(values);
    update_monitors(state);
    return state;
}

DiscreteState Discretization::initialize(InitMode mode, double tau, const CgOptions& cg) const {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("Discretization::initialize: tau must be positive");
    }
    const std::size_t ndof = dof_count();
    const auto nc = static_cast<std::size_t>(components());
    std::vector<double> values(nc * ndof);
    std::vector<double> u(nc);
    for (std::size_t i = 0; i < ndof; ++i) {
        spec_->exact.value(space_.dof_points()[i], 0.0, u);
        for (std::size_t c = 0; c < nc; ++c) {
            values[c * ndof + i] = u[c];
        }
    }
    for (std::size_t c = 0; c < nc; ++c) {
        for (const auto& bc : boundary_constraints(static_cast<int>(c), 0.0)) {
            values[c * ndof + bc.index] = bc.value;
        }
    }

    if (mode == InitMode::ritz) {
        // (kappa(I u0) grad R u0, grad v) = (kappa(I u0) grad u0, grad v)
        const std::size_t nloc = space_.dofs_per_cell();
        const std::size_t nq = rule_.size();
        std::vector<CsrMatrix> matrices(nc, pattern_);
        std::vector<std::vector<double>> rhs(nc, std::vector<double>(ndof, 0.0));
        CellFrame frame;
        for (std::size_t cell = 0; cell < mesh_->cell_count(); ++cell) {
            load_cell(cell, values, frame);
            for (std::size_t q = 0; q < nq; ++q) {
                const double w = rule_.weights[q] * frame.geometry.det_jacobian;
                const Point x = frame.geometry.map(rule_.points[q]);
                const auto exact = exact_derivatives(*spec_, x, 0.0);
                const double* phi = phi_.data() + q * nloc;
                const Point* dphi = frame.dphi.data() + q * nloc;
                for (std::size_t c = 0; c < nc; ++c) {
                    double uh = 0.0;
                    for (std::size_t i = 0; i < nloc; ++i) {
                        uh += frame.local[c * nloc + i] * phi[i];
                    }
                    const double kappa = spec_->kappa(uh);
                    auto& vals = matrices[c].values();
                    for (std::size_t i = 0; i < nloc; ++i) {
                        double gu = 0.0;
                        for (int d = 0; d < mesh_->dim; ++d) {
                            gu += exact.gradient[3 * c + d] * dphi[i][d];
                        }
                        rhs[c][frame.dofs[i]] += w * kappa * gu;
                        for (std::size_t j = 0; j < nloc; ++j) {
                            double gg = 0.0;
                            for (int d = 0; d < mesh_->dim; ++d) {
                                gg += dphi[i][d] * dphi[j][d];
                            }
                            vals[cell_positions_[(cell * nloc + i) * nloc + j]] += w * kappa * gg;
                        }
                    }
                }
            }
        }
        for (std::size_t c = 0; c < nc; ++c) {
            const auto constraints = boundary_constraints(static_cast<int>(c), 0.0);
            apply_dirichlet(matrices[c], rhs[c], constraints);
            std::span<double> x(values.data() + c * ndof, ndof);
            const auto stats = cg_solve(matrices[c], rhs[c], x, cg);
            if (!stats.converged) {
                throw SolverError("Ritz initialization: CG did not converge (relative residual " +
                                      std::to_string(stats.final_relative_residual) + ")",
                                  0);
            }
        }
    }
    return make_state(std::move(values), tau);
}

void Discretization::assemble_into(Scheme scheme, const DiscreteState& state, double t_next,
                                   StepSystem& system) const {
    if (!(state.tau > 0.0)) {
        throw std::invalid_argument("Discretization::assemble_step: state has non-positive tau");
    }
    if (state.values.size() != dof_count() * static_cast<std::size_t>(components())) {
        throw std::invalid_argument("Discretization::assemble_step: state size does not match the space");
    }
    const std::size_t nloc = space_.dofs_per_cell();
    const std::size_t nq = rule_.size();
    const std::size_t ndof = dof_count();
    const auto nc = static_cast<std::size_t>(components());
    const int dim = mesh_->dim;
    const double inv_tau = 1.0 / state.tau;
    const double t_src = options_.source_time == SourceTime::next ? t_next : state.time;

    system.components.assign(nc, LinearSystem{pattern_, std::vector<double>(ndof, 0.0)});
    for (std::size_t c = 0; c < nc; ++c) {
        auto& rhs = system.components[c].rhs;
        mass_.multiply(std::span<const double>(state.values.data() + c * ndof, ndof), rhs);
        for (auto& r : rhs) {
            r *= inv_tau;
        }
    }

    std::vector<double> u(nc), grad(3 * nc), g(nc), f(nc);
    std::vector<double> kloc(nc * nloc * nloc), floc(nc * nloc);
    CellFrame frame;
    for (std::size_t cell = 0; cell < mesh_->cell_count(); ++cell) {
        load_cell(cell, state.values, frame);
        std::fill(kloc.begin(), kloc.end(), 0.0);
        std::fill(floc.begin(), floc.end(), 0.0);
        for (std::size_t q = 0; q < nq; ++q) {
            const double w = rule_.weights[q] * frame.geometry.det_jacobian;
            const Point x = frame.geometry.map(rule_.points[q]);
            const double* phi = phi_.data() + q * nloc;
            const Point* dphi = frame.dphi.data() + q * nloc;

            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t c = 0; c < nc; ++c) {
                u[c] = 0.0;
                for (std::size_t i = 0; i < nloc; ++i) {
                    const double ui = frame.local[c * nloc + i];
                    u[c] += ui * phi[i];
                    for (int d = 0; d < dim; ++d) {
                        grad[3 * c + d] += ui * dphi[i][d];
                    }
                }
            }
            spec_->source(u, grad, x, t_src, g);
            exact_forcing(*spec_, x, t_src, f);

            for (std::size_t c = 0; c < nc; ++c) {
                const double kappa = spec_->kappa(u[c]);
                if (!(kappa > options_.ellipticity_floor)) {
                    throw EllipticityError("step " + std::to_string(state.step + 1) +
                                               ": diffusivity " + std::to_string(kappa) +
                                               " at the discrete solution violates ellipticity at " +
                                               format_point(dim, x),
                                           state.step + 1, x);
                }
                double source = g[c] + f[c];
                double reaction = 0.0;
                if (scheme == Scheme::B) {
                    const double g1 = source_self_derivative(*spec_, u, grad, x, t_src, static_cast<int>(c),
                                                             options_.source_derivative_step);
                    source -= g1 * u[c];
                    reaction = -g1;
                }
                double* kc = kloc.data() + c * nloc * nloc;
                double* fc = floc.data() + c * nloc;
                for (std::size_t i = 0; i < nloc; ++i) {
                    fc[i] += w * source * phi[i];
                    for (std::size_t j = 0; j < nloc; ++j) {
                        double gg = 0.0;
                        for (int d = 0; d < dim; ++d) {
                            gg += dphi[i][d] * dphi[j][d];
                        }
                        kc[i * nloc + j] += w * (kappa * gg + reaction * phi[i] * phi[j]);
                    }
                }
            }
        }
        for (std::size_t c = 0; c < nc; ++c) {
            auto& vals = system.components[c].matrix.values();
            auto& rhs = system.components[c].rhs;
            const double* kc = kloc.data() + c * nloc * nloc;
            const double* fc = floc.data() + c * nloc;
            const std::size_t* pos = cell_positions_.data() + cell * nloc * nloc;
            for (std::size_t i = 0; i < nloc; ++i) {
                rhs[frame.dofs[i]] += fc[i];
                for (std::size_t j = 0; j < nloc; ++j) {
                    vals[pos[i * nloc + j]] += kc[i * nloc + j];
                }
            }
        }
    }
    for (auto& block : system.components) {
        block.matrix.add_scaled(inv_tau, mass_);
    }
}

StepSystem Discretization::assemble_step_unconstrained(Scheme scheme, const DiscreteState& state,
                                                       double t_next) const {
    StepSystem system;
    assemble_into(scheme, state, t_next, system);
    return system;
}

StepSystem Discretization::assemble_step(Scheme scheme, const DiscreteState& state, double t_next) const {
    StepSystem system = assemble_step_unconstrained(scheme, state, t_next);
    for (std::size_t c = 0; c < system.components.size(); ++c) {
        const auto constraints = boundary_constraints(static_cast<int>(c), t_next);
        apply_dirichlet(system.components[c].matrix, system.components[c].rhs, constraints);
    }
    return system;
}

DiscreteState Discretization::advance(Scheme scheme, const DiscreteState& state, const CgOptions& cg) const {
    const double t_next = static_cast<double>(state.step + 1) * state.tau;
    const StepSystem system = assemble_step(scheme, state, t_next);

    DiscreteState next;
    next.step = state.step + 1;
    next.time = t_next;
    next.tau = state.tau;
    next.values = state.values;
    const std::size_t ndof = dof_count();
    for (std::size_t c = 0; c < system.components.size(); ++c) {
        std::span<double> x(next.values.data() + c * ndof, ndof);
        for (const auto& bc : boundary_constraints(static_cast<int>(c), t_next)) {
            x[bc.index] = bc.value;
        }
        SolveStats stats;
        try {
            stats = cg_solve(system.components[c].matrix, system.components[c].rhs, x, cg);
        } catch (const std::domain_error& e) {
            throw SolverError("step " + std::to_string(next.step) + ": " + e.what(), next.step);
        }
        next.cg_iterations += stats.iterations;
        if (!stats.converged) {
            throw SolverError("step " + std::to_string(next.step) + ": CG did not converge after " +
                                  std::to_string(stats.iterations) + " iterations (relative residual " +
                                  std::to_string(stats.final_relative_residual) +
                                  "); the step matrix may have lost positive definiteness, try a smaller tau",
                              next.step);
        }
    }
    update_monitors(next);
    return next;
}

void Discretization::update_monitors(DiscreteState& state) const {
    const std::size_t nloc = space_.dofs_per_cell();
    const std::size_t nq = rule_.size();
    const auto nc = static_cast<std::size_t>(components());
    const int dim = mesh_->dim;
    double linf = 0.0, w1inf = 0.0;
    CellFrame frame;
    for (std::size_t cell = 0; cell < mesh_->cell_count(); ++cell) {
        load_cell(cell, state.values, frame);
        for (std::size_t q = 0; q < nq; ++q) {
            const double* phi = phi_.data() + q * nloc;
            const Point* dphi = frame.dphi.data() + q * nloc;
            for (std::size_t c = 0; c < nc; ++c) {
                double u = 0.0;
                Point g{};
                for (std::size_t i = 0; i < nloc; ++i) {
                    const double ui = frame.local[c * nloc + i];
                    u += ui * phi[i];
                    for (int d = 0; d < dim; ++d) {
                        g[d] += ui * dphi[i][d];
                    }
                }
                linf = std::max(linf, std::abs(u));
                w1inf = std::max(w1inf, std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]));
            }
        }
    }
    state.monitor_linf = linf;
    state.monitor_w1inf = w1inf;
}

}  // namespace pfem
