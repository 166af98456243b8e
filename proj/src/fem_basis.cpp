#include "pfem/fem_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pfem {

namespace {

std::array<double, 4> barycentric(int dim, const Point& xi) {
    std::array<double, 4> lambda{};
    lambda[0] = 1.0;
    for (int d = 0; d < dim; ++d) {
        lambda[0] -= xi[d];
        lambda[d + 1] = xi[d];
    }
    return lambda;
}

Point barycentric_gradient(int dim, int k) {
    Point g{};
    if (k == 0) {
        for (int d = 0; d < dim; ++d) {
            g[d] = -1.0;
        }
    } else {
        g[k - 1] = 1.0;
    }
    return g;
}

}  // namespace

ReferenceElement::ReferenceElement(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("ReferenceElement: dim must be 2 or 3");
    }
    if (degree != 1 && degree != 2) {
        throw std::invalid_argument("ReferenceElement: degree must be 1 or 2");
    }
    local_nodes_.push_back({0.0, 0.0, 0.0});
    for (int d = 0; d < dim; ++d) {
        Point p{};
        p[d] = 1.0;
        local_nodes_.push_back(p);
    }
    if (degree == 2) {
        if (dim == 2) {
            edges_ = {{0, 1}, {1, 2}, {2, 0}};
        } else {
            edges_ = {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}};
        }
        for (const auto& [a, b] : edges_) {
            Point mid{};
            for (int d = 0; d < 3; ++d) {
                mid[d] = 0.5 * (local_nodes_[a][d] + local_nodes_[b][d]);
            }
            local_nodes_.push_back(mid);
        }
    }
}

void ReferenceElement::check_inside(const Point& xi) const {
    const auto lambda = barycentric(dim_, xi);
    for (int k = 0; k <= dim_; ++k) {
        if (lambda[k] < -1e-12) {
            throw std::domain_error("ReferenceElement: point outside the reference simplex");
        }
    }
}

void ReferenceElement::shape_values(const Point& xi, double* out) const {
    const auto lambda = barycentric(dim_, xi);
    const int nv = dim_ + 1;
    if (degree_ == 1) {
        for (int k = 0; k < nv; ++k) {
            out[k] = lambda[k];
        }
        return;
    }
    for (int k = 0; k < nv; ++k) {
        out[k] = lambda[k] * (2.0 * lambda[k] - 1.0);
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto [a, b] = edges_[e];
        out[nv + e] = 4.0 * lambda[a] * lambda[b];
    }
}

void ReferenceElement::shape_gradients(const Point& xi, Point* out) const {
    const auto lambda = barycentric(dim_, xi);
    const int nv = dim_ + 1;
    if (degree_ == 1) {
        for (int k = 0; k < nv; ++k) {
            out[k] = barycentric_gradient(dim_, k);
        }
        return;
    }
    for (int k = 0; k < nv; ++k) {
        const Point g = barycentric_gradient(dim_, k);
        for (int d = 0; d < 3; ++d) {
            out[k][d] = (4.0 * lambda[k] - 1.0) * g[d];
        }
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto [a, b] = edges_[e];
        const Point ga = barycentric_gradient(dim_, a);
        const Point gb = barycentric_gradient(dim_, b);
        for (int d = 0; d < 3; ++d) {
            out[nv + e][d] = 4.0 * (lambda[b] * ga[d] + lambda[a] * gb[d]);
        }
    }
}

std::vector<double> ReferenceElement::shape_values(const Point& xi) const {
    check_inside(xi);
    std::vector<double> v(node_count());
    shape_values(xi, v.data());
    return v;
}

std::vector<Point> ReferenceElement::shape_gradients(const Point& xi) const {
    check_inside(xi);
    std::vector<Point> g(node_count());
    shape_gradients(xi, g.data());
    return g;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre_01: need at least one point");
    }
    // P_n(z) and P_n'(z) by the three-term recurrence
    auto legendre = [n](double z) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (z * p1 - p0) / (z * z - 1.0)};
    };
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double dp = legendre(z).second;
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

QuadratureRule quadrature(int dim, int exact_degree) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("quadrature: dim must be 2 or 3");
    }
    if (exact_degree < 1 || exact_degree > kMaxQuadratureDegree) {
        throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(exact_degree));
    }
    QuadratureRule rule;
    rule.dim = dim;
    rule.exact_degree = exact_degree;
    const double measure = dim == 2 ? 0.5 : 1.0 / 6.0;

    if (exact_degree == 1) {
        rule.points.push_back(dim == 2 ? Point{1.0 / 3, 1.0 / 3, 0.0} : Point{0.25, 0.25, 0.25});
        rule.weights.push_back(measure);
        return rule;
    }
    if (exact_degree == 2) {
        if (dim == 2) {
            rule.points = {{0.5, 0.0, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.5, 0.0}};
            rule.weights = {1.0 / 6, 1.0 / 6, 1.0 / 6};
        } else {
            const double a = (5.0 + 3.0 * std::sqrt(5.0)) / 20.0;
            const double b = (5.0 - std::sqrt(5.0)) / 20.0;
            rule.points = {{b, b, b}, {a, b, b}, {b, a, b}, {b, b, a}};
            rule.weights = {1.0 / 24, 1.0 / 24, 1.0 / 24, 1.0 / 24};
        }
        return rule;
    }

    // Conical product: collapse the simplex onto the unit cube and use
    // Gauss-Legendre in each direction, with point counts sized for the
    // extra Jacobian powers (1-b) and (1-c)^2.
    const int p = exact_degree;
    const auto [xa, wa] = gauss_legendre_01((p + 2) / 2);
    const auto [xb, wb] = gauss_legendre_01((p + 3) / 2);
    if (dim == 2) {
        for (std::size_t j = 0; j < xb.size(); ++j) {
            for (std::size_t i = 0; i < xa.size(); ++i) {
                const double b = xb[j];
                rule.points.push_back({xa[i] * (1.0 - b), b, 0.0});
                rule.weights.push_back(wa[i] * wb[j] * (1.0 - b));
            }
        }
        return rule;
    }
    const auto [xc, wc] = gauss_legendre_01((p + 4) / 2);
    for (std::size_t k = 0; k < xc.size(); ++k) {
        for (std::size_t j = 0; j < xb.size(); ++j) {
            for (std::size_t i = 0; i < xa.size(); ++i) {
                const double b = xb[j], c = xc[k];
                rule.points.push_back({xa[i] * (1.0 - b) * (1.0 - c), b * (1.0 - c), c});
                rule.weights.push_back(wa[i] * wb[j] * wc[k] * (1.0 - b) * (1.0 - c) * (1.0 - c));
            }
        }
    }
    return rule;
}

}  // namespace pfem
