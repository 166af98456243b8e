#include "pfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pfem {

namespace {

std::vector<double> eval_exact(const ProblemSpec& spec, const Point& x, double t) {
    std::vector<double> u(static_cast<std::size_t>(spec.components));
    spec.exact.value(x, t, u);
    return u;
}

// |grad u|^4 / (1 + u), shared by Examples 1 and 3.
SourceFn quartic_gradient_source(int dim) {
    return [dim](std::span<const double> u, std::span<const double> grad, const Point&, double,
                 std::span<double> out) {
        double g2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            g2 += grad[d] * grad[d];
        }
        out[0] = g2 * g2 / (1.0 + u[0]);
    };
}

}  // namespace

bool domain_contains(DomainTag domain, const Point& x) {
    constexpr double eps = 1e-14;
    switch (domain) {
        case DomainTag::square:
            return x[0] >= -eps && x[0] <= 1.0 + eps && x[1] >= -eps && x[1] <= 1.0 + eps;
        case DomainTag::cube:
            return x[0] >= -eps && x[0] <= 1.0 + eps && x[1] >= -eps && x[1] <= 1.0 + eps && x[2] >= -eps &&
                   x[2] <= 1.0 + eps;
        case DomainTag::disk:
            return x[0] * x[0] + x[1] * x[1] <= 1.0 + eps;
    }
    return false;
}

ExactDerivatives exact_derivatives(const ProblemSpec& spec, const Point& x, double t) {
    const auto nc = static_cast<std::size_t>(spec.components);
    if (nc > kMaxComponents) {
        throw std::invalid_argument("exact_derivatives: too many components");
    }
    ExactDerivatives out;
    std::array<Jet, kMaxComponents> storage{};
    const std::span<Jet> u(storage.data(), nc);
    const std::array<Jet, 3> xj{Jet(x[0]), Jet(x[1]), Jet(x[2])};
    for (int d = 0; d < spec.dim; ++d) {
        auto seeded = xj;
        seeded[d] = Jet::variable(x[d]);
        spec.exact.jet(seeded, Jet(t), u);
        for (std::size_t c = 0; c < nc; ++c) {
            out.value[c] = u[c].v;
            out.gradient[3 * c + d] = u[c].d;
            out.laplacian[c] += u[c].dd;
        }
    }
    spec.exact.jet(xj, Jet::variable(t), u);
    for (std::size_t c = 0; c < nc; ++c) {
        out.time_derivative[c] = u[c].d;
    }
    return out;
}

void exact_forcing(const ProblemSpec& spec, const Point& x, double t, std::span<double> out) {
    const auto ex = exact_derivatives(spec, x, t);
    const auto nc = static_cast<std::size_t>(spec.components);
    std::array<double, kMaxComponents> g{};
    spec.source(std::span<const double>(ex.value.data(), nc), ex.gradient, x, t, std::span<double>(g.data(), nc));
    for (std::size_t c = 0; c < nc; ++c) {
        const Jet k = spec.kappa.jet(Jet::variable(ex.value[c]));
        double grad2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            grad2 += ex.gradient[3 * c + d] * ex.gradient[3 * c + d];
        }
        const double divergence = k.d * grad2 + k.v * ex.laplacian[c];
        out[c] = ex.time_derivative[c] - divergence - g[c];
    }
}

void manufactured_forcing(const ProblemSpec& spec, const FdStencil& stencil, const Point& x, double t,
                          std::span<double> out) {
    if (!(stencil.space_step > 0.0) || !(stencil.time_step > 0.0)) {
        throw std::invalid_argument("manufactured_forcing: stencil steps must be positive");
    }
    const auto nc = static_cast<std::size_t>(spec.components);
    const double h = stencil.space_step;
    const double dt = stencil.time_step;
    const auto u0 = eval_exact(spec, x, t);

    std::vector<double> ut(nc);
    if (t - dt >= 0.0) {
        const auto up = eval_exact(spec, x, t + dt);
        const auto um = eval_exact(spec, x, t - dt);
        for (std::size_t c = 0; c < nc; ++c) {
            ut[c] = (up[c] - um[c]) / (2.0 * dt);
        }
    } else {
        const auto u1 = eval_exact(spec, x, t + dt);
        const auto u2 = eval_exact(spec, x, t + 2.0 * dt);
        for (std::size_t c = 0; c < nc; ++c) {
            ut[c] = (-3.0 * u0[c] + 4.0 * u1[c] - u2[c]) / (2.0 * dt);
        }
    }

    std::vector<double> grad(3 * nc, 0.0), lap(nc, 0.0);
    for (int d = 0; d < spec.dim; ++d) {
        auto shifted = [&](double offset) {
            Point p = x;
            p[d] += offset;
            return p;
        };
        if (domain_contains(spec.domain, shifted(h)) && domain_contains(spec.domain, shifted(-h))) {
            const auto up = eval_exact(spec, shifted(h), t);
            const auto um = eval_exact(spec, shifted(-h), t);
            for (std::size_t c = 0; c < nc; ++c) {
                grad[3 * c + d] = (up[c] - um[c]) / (2.0 * h);
                lap[c] += (up[c] - 2.0 * u0[c] + um[c]) / (h * h);
            }
            continue;
        }
        // One-sided second-order differences pointing into the domain.
        const double s = domain_contains(spec.domain, shifted(3.0 * h)) ? 1.0 : -1.0;
        const auto u1 = eval_exact(spec, shifted(s * h), t);
        const auto u2 = eval_exact(spec, shifted(2.0 * s * h), t);
        const auto u3 = eval_exact(spec, shifted(3.0 * s * h), t);
        for (std::size_t c = 0; c < nc; ++c) {
            grad[3 * c + d] = s * (-3.0 * u0[c] + 4.0 * u1[c] - u2[c]) / (2.0 * h);
            lap[c] += (2.0 * u0[c] - 5.0 * u1[c] + 4.0 * u2[c] - u3[c]) / (h * h);
        }
    }

    std::vector<double> g(nc);
    spec.source(u0, grad, x, t, g);
    for (std::size_t c = 0; c < nc; ++c) {
        const double k = spec.kappa(u0[c]);
        const double dk = (spec.kappa(u0[c] + h) - spec.kappa(u0[c] - h)) / (2.0 * h);
        double grad2 = 0.0;
        for (int d = 0; d < 3; ++d) {
            grad2 += grad[3 * c + d] * grad[3 * c + d];
        }
        out[c] = ut[c] - (dk * grad2 + k * lap[c]) - g[c];
    }
}

double source_self_derivative(const ProblemSpec& spec, std::span<const double> u, std::span<const double> grad,
                              const Point& x, double t, int component, double step) {
    const auto nc = static_cast<std::size_t>(spec.components);
    const auto c = static_cast<std::size_t>(component);
    std::array<double, kMaxComponents> shifted{}, gp{}, gm{};
    std::copy(u.begin(), u.end(), shifted.begin());
    const std::span<const double> us(shifted.data(), nc);
    shifted[c] = u[c] + step;
    spec.source(us, grad, x, t, std::span<double>(gp.data(), nc));
    shifted[c] = u[c] - step;
    spec.source(us, grad, x, t, std::span<double>(gm.data(), nc));
    return (gp[c] - gm[c]) / (2.0 * step);
}

ProblemSpec example_1() {
    ProblemSpec spec;
    spec.name = "example_1";
    spec.dim = 2;
    spec.components = 1;
    spec.domain = DomainTag::square;
    spec.boundary = BoundaryKind::homogeneous;
    spec.final_time = 1.0;
    spec.kappa = make_coefficient([](const auto&) { return 1.0; });
    spec.source = quartic_gradient_source(2);
    spec.exact = make_exact([](const auto& p, const auto& t, auto out) {
        const auto& x = p[0];
        const auto& y = p[1];
        const auto s = math::sech(x + y - t);
        out[0] = 10.0 * x * (1.0 - x) * y * (1.0 - y) * s * s;
    });
    return spec;
}

ProblemSpec example_2() {
    ProblemSpec spec;
    spec.name = "example_2";
    spec.dim = 2;
    spec.components = 2;
    spec.domain = DomainTag::disk;
    spec.boundary = BoundaryKind::exact_trace;
    spec.final_time = 1.0;
    spec.kappa = make_coefficient([](const auto&) { return 1.0; });
    // u_t + (u . grad) u - Lap u = f, i.e. g_i = -sum_j u_j d_j u_i.
    spec.source = [](std::span<const double> u, std::span<const double> grad, const Point&, double,
                     std::span<double> out) {
        for (std::size_t i = 0; i < 2; ++i) {
            out[i] = -(u[0] * grad[3 * i + 0] + u[1] * grad[3 * i + 1]);
        }
    };
    spec.exact = make_exact([](const auto& p, const auto& t, auto out) {
        const auto s = p[0] + p[1] - t;
        const auto se = math::sech(s);
        const auto ch = math::cosh(s);
        out[0] = se * se;
        out[1] = ch * ch;
    });
    return spec;
}

ProblemSpec example_3() {
    ProblemSpec spec;
    spec.name = "example_3";
    spec.dim = 3;
    spec.components = 1;
    spec.domain = DomainTag::cube;
    spec.boundary = BoundaryKind::homogeneous;
    spec.final_time = 1.0;
    spec.kappa = make_coefficient([](const auto& u) {
        const auto s = math::sin(u);
        return 1.0 + s * s;
    });
    spec.source = quartic_gradient_source(3);
    spec.exact = make_exact([](const auto& p, const auto& t, auto out) {
        const auto& x = p[0];
        const auto& y = p[1];
        const auto& z = p[2];
        out[0] = 100.0 * x * (1.0 - x) * y * (1.0 - y) * z * (1.0 - z) * math::sin(x + 2.0 * y - z) * t *
                 math::exp(-t);
    });
    return spec;
}

ProblemSpec builtin_example(int number) {
    switch (number) {
        case 1: return example_1();
        case 2: return example_2();
        case 3: return example_3();
        default:
            throw std::invalid_argument("builtin_example: unknown example " + std::to_string(number));
    }
}

}  // namespace pfem
