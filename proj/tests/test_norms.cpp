#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "pfem/norms.hpp"

using namespace pfem;

namespace {

template <class F>
ProblemSpec with_exact(F f) {
    ProblemSpec spec = example_1();
    spec.exact = make_exact(f);
    return spec;
}

}  // namespace

TEST(ErrorNorms, InterpolantOfSpaceMemberHasNoError) {
    const auto mesh = unit_square_mesh(4);
    const auto spec = with_exact([](const auto& x, const auto& t, auto out) { out[0] = x[0] + 2.0 * x[1] - t; });
    const LagrangeSpace space(mesh, 1);
    const auto values = space.interpolate([](const Point& x) { return x[0] + 2.0 * x[1] - 0.5; });
    const auto e = error_norms(spec, space, values, 0.5);
    EXPECT_LT(e.l2, 1e-14);
    EXPECT_LT(e.h1, 1e-13);
}

TEST(ErrorNorms, KnownValuesAgainstZero) {
    const auto mesh = unit_square_mesh(3);
    const LagrangeSpace space(mesh, 2);
    const std::vector<double> zero(space.dof_count(), 0.0);
    const auto one = error_norms(with_exact([](const auto&, const auto&, auto out) { out[0] = 1.0; }), space, zero, 0.0);
    EXPECT_NEAR(one.l2, 1.0, 1e-14);
    EXPECT_NEAR(one.h1, 1.0, 1e-14);
    const auto lin = error_norms(with_exact([](const auto& x, const auto&, auto out) { out[0] = x[0]; }), space, zero, 0.0);
    EXPECT_NEAR(lin.l2, 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(lin.h1, 2.0 / std::sqrt(3.0), 1e-14);
}

TEST(ErrorNorms, CubeAndDisk) {
    const auto cube = unit_cube_mesh(2);
    const LagrangeSpace cs(cube, 1);
    auto spec = example_3();
    spec.exact = make_exact([](const auto& x, const auto&, auto out) { out[0] = x[2]; });
    const auto e = error_norms(spec, cs, std::vector<double>(cs.dof_count(), 0.0), 0.0);
    EXPECT_NEAR(e.l2, 1.0 / std::sqrt(3.0), 1e-14);
    const auto disk = unit_disk_mesh(32);
    const LagrangeSpace ds(disk, 1);
    auto burgers = example_2();
    burgers.exact = make_exact([](const auto&, const auto&, auto out) {
        out[0] = 1.0;
        out[1] = 1.0;
    });
    const auto d = error_norms(burgers, ds, std::vector<double>(2 * ds.dof_count(), 0.0), 0.0);
    EXPECT_NEAR(d.l2 * d.l2, 2.0 * total_measure(disk), 1e-12);
}

TEST(ErrorNorms, QuadratureDegreeIsConverged) {
    const auto spec = example_1();
    for (int degree : {1, 2}) {
        const auto mesh = unit_square_mesh(8);
        const LagrangeSpace space(mesh, degree);
        const auto values = space.interpolate([](const Point& x) { return std::sin(3 * x[0]) * x[1]; });
        const auto base = error_norms(spec, space, values, 0.7);
        const auto fine = error_norms(spec, space, values, 0.7, kMaxQuadratureDegree);
        EXPECT_NEAR(base.l2, fine.l2, 1e-3 * fine.l2);
        EXPECT_NEAR(base.h1, fine.h1, 1e-3 * fine.h1);
    }
}

TEST(ErrorNorms, RejectsWrongSize) {
    const auto mesh = unit_square_mesh(2);
    const LagrangeSpace space(mesh, 1);
    EXPECT_THROW(error_norms(example_1(), space, std::vector<double>(3), 0.0), std::invalid_argument);
}

TEST(DiscreteDistance, IsAMetric) {
    const auto mesh = unit_square_mesh(5);
    const LagrangeSpace space(mesh, 2);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] {
        std::vector<double> v(space.dof_count());
        for (auto& x : v) {
            x = u(rng);
        }
        return v;
    };
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = draw(), b = draw(), c = draw();
        const auto ab = discrete_distance(space, 1, a, b);
        const auto ba = discrete_distance(space, 1, b, a);
        const auto bc = discrete_distance(space, 1, b, c);
        const auto ac = discrete_distance(space, 1, a, c);
        EXPECT_NEAR(ab.l2, ba.l2, 1e-14);
        EXPECT_LE(ac.l2, ab.l2 + bc.l2 + 1e-14);
        EXPECT_LE(ac.h1, ab.h1 + bc.h1 + 1e-14);
        EXPECT_LE(ab.l2, ab.h1);
        EXPECT_EQ(discrete_distance(space, 1, a, a).h1, 0.0);
    }
}

TEST(ObservedRate, Examples) {
    EXPECT_NEAR(observed_rate(1.0 / 16, 7.285e-3, 1.0 / 32, 1.720e-3), 2.08, 0.01);
    EXPECT_NEAR(observed_rate(0.5, 4.0, 0.25, 1.0), 2.0, 1e-15);
    EXPECT_NEAR(observed_rate(0.5, 1.0, 0.25, 1.0), 0.0, 1e-15);
    EXPECT_THROW(observed_rate(0.5, 0.0, 0.25, 1.0), std::domain_error);
    EXPECT_THROW(observed_rate(0.25, 1.0, 0.5, 1.0), std::domain_error);
    EXPECT_THROW(observed_rate(0.5, 1.0, 0.5, 1.0), std::domain_error);
}

TEST(ObservedRate, ScaleInvariance) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double e1 = u(rng), e2 = u(rng), s = u(rng);
        const double r = observed_rate(0.2, e1, 0.1, e2);
        EXPECT_NEAR(observed_rate(0.2, s * e1, 0.1, s * e2), r, 1e-12);
        EXPECT_NEAR(observed_rate(0.2 * s, e1, 0.1 * s, e2), r, 1e-12);
    }
}
