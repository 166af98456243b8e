#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pfem/jet.hpp"
#include "pfem/problem.hpp"

using namespace pfem;

namespace {

// Random point at distance >= margin from the boundary.
Point random_point(DomainTag domain, std::mt19937_64& rng, double margin) {
    std::uniform_real_distribution<double> u(margin, 1.0 - margin);
    while (true) {
        Point p{u(rng), u(rng), domain == DomainTag::cube ? u(rng) : 0.0};
        if (domain == DomainTag::disk) {
            p[0] = 2.0 * p[0] - 1.0;
            p[1] = 2.0 * p[1] - 1.0;
            if (std::hypot(p[0], p[1]) <= 1.0 - margin) {
                return p;
            }
            continue;
        }
        return p;
    }
}

constexpr double kOracleStep = 4e-3;

// Second-order differences at h and h/2 combined to fourth order.
std::vector<double> richardson_forcing(const ProblemSpec& spec, const Point& x, double t, double h) {
    const auto nc = static_cast<std::size_t>(spec.components);
    std::vector<double> coarse(nc), fine(nc), out(nc);
    manufactured_forcing(spec, {h, h}, x, t, coarse);
    manufactured_forcing(spec, {h / 2, h / 2}, x, t, fine);
    for (std::size_t c = 0; c < nc; ++c) {
        out[c] = (4.0 * fine[c] - coarse[c]) / 3.0;
    }
    return out;
}

ProblemSpec scalar_problem(std::function<double(double)> kappa) {
    ProblemSpec spec = example_1();
    spec.kappa.value = kappa;
    spec.source = [](std::span<const double>, std::span<const double>, const Point&, double,
                     std::span<double> out) { out[0] = 0.0; };
    return spec;
}

}  // namespace

TEST(Examples, ExactSolutionValues) {
    std::vector<double> u(1);
    example_1().exact.value({0.5, 0.5, 0}, 0.0, u);
    EXPECT_NEAR(u[0], 0.262484, 1e-6);
    example_3().exact.value({0.5, 0.5, 0.5}, 1.0, u);
    EXPECT_NEAR(u[0], 0.483687, 1e-6);
    std::vector<double> w(2);
    example_2().exact.value({0.0, 0.0, 0}, 0.0, w);
    EXPECT_DOUBLE_EQ(w[0], 1.0);
    EXPECT_DOUBLE_EQ(w[1], 1.0);
}

TEST(Examples, Metadata) {
    EXPECT_EQ(builtin_example(2).components, 2);
    EXPECT_EQ(builtin_example(2).boundary, BoundaryKind::exact_trace);
    EXPECT_EQ(builtin_example(3).dim, 3);
    EXPECT_THROW(builtin_example(4), std::invalid_argument);
}

TEST(Examples, HomogeneousTraces) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(1);
    for (int k = 0; k < 50; ++k) {
        const double s = u(rng), t = u(rng);
        example_1().exact.value({0.0, s, 0}, t, v);
        EXPECT_EQ(v[0], 0.0);
        example_1().exact.value({s, 1.0, 0}, t, v);
        EXPECT_NEAR(v[0], 0.0, 1e-15);
        example_3().exact.value({s, u(rng), 1.0}, t, v);
        EXPECT_NEAR(v[0], 0.0, 1e-14);
    }
}

TEST(Examples, DiffusivityBoundedBelow) {
    const auto spec = example_3();
    for (double u = -20.0; u <= 20.0; u += 0.01) {
        EXPECT_GE(spec.kappa(u), 1.0);
        EXPECT_NEAR(spec.kappa.jet(Jet(u)).v, spec.kappa(u), 1e-15);
    }
}

TEST(Jet, DerivativesOfElementaryFunctions) {
    const double x = 0.37;
    const auto s = math::sech(Jet::variable(x));
    const double sx = 1.0 / std::cosh(x);
    EXPECT_NEAR(s.v, sx, 1e-15);
    EXPECT_NEAR(s.d, -sx * std::tanh(x), 1e-15);
    EXPECT_NEAR(s.dd, sx * (std::tanh(x) * std::tanh(x) - sx * sx), 1e-14);
    const auto q = Jet(1.0) / (Jet(1.0) + Jet::variable(x));
    EXPECT_NEAR(q.d, -1.0 / ((1 + x) * (1 + x)), 1e-15);
    EXPECT_NEAR(q.dd, 2.0 / std::pow(1 + x, 3), 1e-14);
    const auto e = math::exp(Jet::variable(x) * Jet::variable(x));
    EXPECT_NEAR(e.dd, (2.0 + 4.0 * x * x) * std::exp(x * x), 1e-13);
}

TEST(Forcing, ZeroForZeroSolution) {
    auto spec = example_1();
    spec.exact = make_exact([](const auto&, const auto&, auto out) { out[0] = 0.0; });
    std::vector<double> f(1);
    exact_forcing(spec, {0.3, 0.4, 0}, 0.2, f);
    EXPECT_EQ(f[0], 0.0);
    manufactured_forcing(spec, {}, {0.3, 0.4, 0}, 0.2, f);
    EXPECT_EQ(f[0], 0.0);
}

TEST(Forcing, LinearInSpace) {
    auto spec = scalar_problem([](double) { return 1.0; });
    spec.exact = make_exact([](const auto& x, const auto&, auto out) { out[0] = x[0] + x[1]; });
    std::vector<double> f(1);
    manufactured_forcing(spec, {1e-2, 1e-5}, {0.25, 0.7, 0}, 0.3, f);
    EXPECT_NEAR(f[0], 0.0, 1e-9);
    exact_forcing(spec, {0.25, 0.7, 0}, 0.3, f);
    EXPECT_NEAR(f[0], 0.0, 1e-14);
}

TEST(Forcing, LinearInTime) {
    auto spec = scalar_problem([](double) { return 1.0; });
    spec.exact = make_exact([](const auto&, const auto& t, auto out) { out[0] = t; });
    std::vector<double> f(1);
    manufactured_forcing(spec, {}, {0.5, 0.5, 0}, 0.0, f);
    EXPECT_NEAR(f[0], 1.0, 1e-9);
    manufactured_forcing(spec, {}, {0.5, 0.5, 0}, 0.6, f);
    EXPECT_NEAR(f[0], 1.0, 1e-9);
}

TEST(Forcing, NonlinearDiffusivityTerm) {
    // u = x, kappa = 1 + u^2: -div(kappa grad u) = -2x.
    auto spec = scalar_problem([](double u) { return 1.0 + u * u; });
    spec.kappa = make_coefficient([](const auto& u) { return 1.0 + u * u; });
    spec.exact = make_exact([](const auto& x, const auto&, auto out) { out[0] = x[0]; });
    std::vector<double> f(1);
    exact_forcing(spec, {0.4, 0.1, 0}, 0.0, f);
    EXPECT_NEAR(f[0], -0.8, 1e-14);
}

class ForcingOracle : public ::testing::TestWithParam<int> {};

TEST_P(ForcingOracle, JetMatchesFiniteDifferences) {
    const auto spec = builtin_example(GetParam());
    std::mt19937_64 rng(100 + GetParam());
    std::uniform_real_distribution<double> time(2.0 * kOracleStep, spec.final_time);
    const auto nc = static_cast<std::size_t>(spec.components);
    std::vector<double> f(nc);
    for (int k = 0; k < 100; ++k) {
        // Both stencils stay central away from the boundary.
        const auto x = random_point(spec.domain, rng, 2.0 * kOracleStep);
        const double t = time(rng);
        exact_forcing(spec, x, t, f);
        const auto reference = richardson_forcing(spec, x, t, kOracleStep);
        for (std::size_t c = 0; c < nc; ++c) {
            EXPECT_NEAR(f[c], reference[c], 1e-7) << "x = (" << x[0] << ", " << x[1] << ", " << x[2]
                                                  << "), t = " << t;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Examples, ForcingOracle, ::testing::Values(1, 2, 3));

TEST(Forcing, RejectsBadStencil) {
    std::vector<double> f(1);
    EXPECT_THROW(manufactured_forcing(example_1(), {0.0, 1e-5}, {0.5, 0.5, 0}, 0.5, f), std::invalid_argument);
}

TEST(SourceDerivative, MatchesAnalytic) {
    const auto spec = example_1();
    const std::vector<double> u{0.3}, grad{1.0, 2.0, 0.0};
    // g = |grad u|^4 / (1 + u), dg/du = -25 / (1 + u)^2
    EXPECT_NEAR(source_self_derivative(spec, u, grad, {0.5, 0.5, 0}, 0.0, 0), -25.0 / (1.3 * 1.3), 1e-6);
    const auto burgers = example_2();
    const std::vector<double> w{0.5, -1.0}, gw{2.0, 3.0, 0.0, -1.0, 4.0, 0.0};
    // g_0 = -(w0 * d0 w0 + w1 * d1 w0), dg_0/dw0 = -d0 w0
    EXPECT_NEAR(source_self_derivative(burgers, w, gw, {0, 0, 0}, 0.0, 0), -2.0, 1e-8);
    EXPECT_NEAR(source_self_derivative(burgers, w, gw, {0, 0, 0}, 0.0, 1), -4.0, 1e-8);
}

TEST(Domain, Membership) {
    EXPECT_TRUE(domain_contains(DomainTag::square, {1.0, 0.0, 0}));
    EXPECT_FALSE(domain_contains(DomainTag::square, {1.01, 0.5, 0}));
    EXPECT_TRUE(domain_contains(DomainTag::disk, {0.6, 0.8, 0}));
    EXPECT_FALSE(domain_contains(DomainTag::disk, {0.8, 0.8, 0}));
    EXPECT_FALSE(domain_contains(DomainTag::cube, {0.5, 0.5, -0.1}));
}
