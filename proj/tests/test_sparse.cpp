#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pfem/fem_basis.hpp"
#include "pfem/lagrange_space.hpp"
#include "pfem/sparse.hpp"

using namespace pfem;

namespace {

using Dense = std::vector<std::vector<double>>;

Dense to_dense(const CsrMatrix& A) {
    Dense d(A.size(), std::vector<double>(A.size(), 0.0));
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) {
            d[i][A.column_indices()[k]] = A.values()[k];
        }
    }
    return d;
}

// Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(Dense A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(A[i][k]) > std::abs(A[p][k])) {
                p = i;
            }
        }
        std::swap(A[k], A[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            for (std::size_t j = k; j < n; ++j) {
                A[i][j] -= f * A[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= A[i][j] * x[j];
        }
        x[i] = s / A[i][i];
    }
    return x;
}

// P1 stiffness plus `shift` times mass on a mesh, assembled from element
// formulas independent of the scheme module.
CsrMatrix p1_operator(const Mesh& mesh, double shift) {
    std::vector<Triplet> t;
    const std::size_t nv = mesh.vertices_per_cell();
    const ReferenceElement element(mesh.dim, 1);
    const auto ref = element.shape_gradients({0.25, 0.25, mesh.dim == 3 ? 0.25 : 0.0});
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const auto geo = element_geometry(mesh, c);
        for (std::size_t i = 0; i < nv; ++i) {
            const auto gi = geo.push_gradient(ref[i]);
            for (std::size_t j = 0; j < nv; ++j) {
                const auto gj = geo.push_gradient(ref[j]);
                const double k = geo.measure * (gi[0] * gj[0] + gi[1] * gj[1] + gi[2] * gj[2]);
                const double m = geo.measure * (i == j ? 2.0 : 1.0) / ((nv + 1.0) * nv);
                t.push_back({mesh.cells[c][i], mesh.cells[c][j], k + shift * m});
            }
        }
    }
    return CsrMatrix::from_triplets(mesh.node_count(), t);
}

std::vector<double> residual(const CsrMatrix& A, std::span<const double> x, std::span<const double> b) {
    auto r = A * x;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = b[i] - r[i];
    }
    return r;
}

}  // namespace

TEST(Csr, TripletsSumDuplicatesRegardlessOfOrder) {
    std::vector<Triplet> t{{0, 0, 1.0}, {1, 2, 3.0}, {0, 0, 2.0}, {2, 1, -1.0}, {1, 2, 0.5}};
    const auto A = CsrMatrix::from_triplets(3, t);
    std::reverse(t.begin(), t.end());
    const auto B = CsrMatrix::from_triplets(3, t);
    EXPECT_EQ(A.nonzeros(), 3u);
    EXPECT_DOUBLE_EQ(A.at(0, 0), 3.0);
    EXPECT_DOUBLE_EQ(A.at(1, 2), 3.5);
    EXPECT_DOUBLE_EQ(A.at(2, 1), -1.0);
    EXPECT_DOUBLE_EQ(A.at(2, 2), 0.0);
    EXPECT_EQ(A.position(2, 2), CsrMatrix::npos);
    EXPECT_EQ(A.values(), B.values());
    EXPECT_EQ(A.column_indices(), B.column_indices());
    EXPECT_THROW(CsrMatrix::from_triplets(2, t), std::out_of_range);
}

TEST(Csr, MultiplyMatchesDense) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Triplet> t;
    for (int k = 0; k < 60; ++k) {
        t.push_back({rng() % 10, rng() % 10, u(rng)});
    }
    const auto A = CsrMatrix::from_triplets(10, t);
    const auto D = to_dense(A);
    std::vector<double> x(10);
    for (auto& v : x) {
        v = u(rng);
    }
    const auto y = A * x;
    for (std::size_t i = 0; i < 10; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 10; ++j) {
            s += D[i][j] * x[j];
        }
        EXPECT_NEAR(y[i], s, 1e-14);
    }
}

TEST(Csr, LinearityOfMultiply) {
    const auto A = p1_operator(unit_square_mesh(4), 3.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(A.size()), y(A.size()), z(A.size());
        const double a = u(rng), b = u(rng);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
            z[i] = a * x[i] + b * y[i];
        }
        const auto Ax = A * x, Ay = A * y, Az = A * z;
        for (std::size_t i = 0; i < x.size(); ++i) {
            EXPECT_NEAR(Az[i], a * Ax[i] + b * Ay[i], 1e-12);
        }
    }
}

TEST(Csr, PatternOperations) {
    auto A = CsrMatrix::from_pattern({{0, 1}, {0, 1, 2}, {1, 2}});
    EXPECT_TRUE(A.structurally_symmetric());
    EXPECT_EQ(A.nonzeros(), 7u);
    auto B = A;
    std::fill(B.values().begin(), B.values().end(), 2.0);
    A.add_scaled(0.5, B);
    EXPECT_DOUBLE_EQ(A.at(1, 2), 1.0);
    EXPECT_EQ(A.diagonal(), (std::vector<double>{1.0, 1.0, 1.0}));
    A.set_zero();
    EXPECT_DOUBLE_EQ(A.at(1, 2), 0.0);
    const auto C = CsrMatrix::from_pattern({{0}, {1}, {2}});
    EXPECT_THROW(A.add_scaled(1.0, C), std::invalid_argument);
    const std::vector<Triplet> t{{0, 1, 1.0}};
    EXPECT_FALSE(CsrMatrix::from_triplets(2, t).structurally_symmetric());
}

TEST(Dirichlet, UnitSquareLeavesOneUnknown) {
    const auto mesh = unit_square_mesh(2);
    auto A = p1_operator(mesh, 0.0);
    std::vector<double> b(A.size(), 1.0);
    std::vector<DirichletConstraint> bc;
    for (auto i : mesh.boundary_nodes) {
        bc.push_back({i, 0.5});
    }
    apply_dirichlet(A, b, bc);
    EXPECT_EQ(bc.size(), 8u);
    std::size_t free = 0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const bool constrained = std::binary_search(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end(), i);
        if (!constrained) {
            ++free;
            EXPECT_EQ(i, 4u);
        } else {
            EXPECT_DOUBLE_EQ(A.at(i, i), 1.0);
            EXPECT_DOUBLE_EQ(b[i], 0.5);
        }
    }
    EXPECT_EQ(free, 1u);
    const auto D = to_dense(A);
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = 0; j < A.size(); ++j) {
            EXPECT_DOUBLE_EQ(D[i][j], D[j][i]);
        }
    }
    // Laplace with constant data: the centre must reproduce the constant.
    std::fill(b.begin(), b.end(), 0.0);
    A = p1_operator(mesh, 0.0);
    apply_dirichlet(A, b, bc);
    const auto [x, stats] = cg_solve(A, b);
    EXPECT_TRUE(stats.converged);
    EXPECT_NEAR(x[4], 0.5, 1e-12);
}

TEST(Dirichlet, RejectsBadIndexWithoutMutating) {
    auto A = p1_operator(unit_square_mesh(1), 1.0);
    const auto before = A.values();
    std::vector<double> b(A.size(), 1.0);
    const std::vector<DirichletConstraint> bc{{0, 1.0}, {9, 0.0}};
    EXPECT_THROW(apply_dirichlet(A, b, bc), std::out_of_range);
    EXPECT_EQ(A.values(), before);
}

TEST(Dirichlet, ByValueOverload) {
    const LinearSystem sys{p1_operator(unit_square_mesh(1), 1.0), std::vector<double>(4, 0.0)};
    const std::vector<DirichletConstraint> bc{{1, 2.0}};
    const auto out = apply_dirichlet(sys, bc);
    EXPECT_DOUBLE_EQ(out.rhs[1], 2.0);
    EXPECT_DOUBLE_EQ(out.matrix.at(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(sys.rhs[1], 0.0);
}

TEST(Cg, ReferenceStiffnessWithPinnedVertexMatchesDense) {
    // Reference triangle stiffness (1/2)[[2,-1,-1],[-1,1,0],[-1,0,1]] plus mass.
    const auto mesh = make_mesh(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {Cell{0, 1, 2, 0}});
    auto A = p1_operator(mesh, 1.0);
    EXPECT_NEAR(A.at(0, 0), 1.0 + 1.0 / 12.0, 1e-15);
    EXPECT_NEAR(A.at(1, 2), 1.0 / 24.0, 1e-15);
    std::vector<double> b{1.0, -2.0, 0.5};
    const auto expected = dense_solve(to_dense(A), b);
    const auto [x, stats] = cg_solve(A, b, {1e-14, 0});
    ASSERT_TRUE(stats.converged);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(x[i], expected[i], 1e-12);
    }
}

TEST(Cg, ZeroRightHandSide) {
    const auto A = p1_operator(unit_square_mesh(3), 1.0);
    std::vector<double> b(A.size(), 0.0), x(A.size(), 5.0);
    const auto stats = cg_solve(A, b, x);
    EXPECT_TRUE(stats.converged);
    EXPECT_EQ(stats.iterations, 0u);
    EXPECT_TRUE(std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; }));
}

TEST(Cg, ExactInitialGuessStopsImmediately) {
    const auto A = p1_operator(unit_square_mesh(3), 1.0);
    std::vector<double> x(A.size(), 1.0);
    const auto b = A * x;
    const auto stats = cg_solve(A, b, x);
    EXPECT_TRUE(stats.converged);
    EXPECT_EQ(stats.iterations, 0u);
}

TEST(Cg, RejectsNonPositiveDiagonal) {
    const std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, -1.0}};
    const auto A = CsrMatrix::from_triplets(2, t);
    const std::vector<double> b{1.0, 1.0};
    EXPECT_THROW(cg_solve(A, b), std::domain_error);
}

TEST(Cg, IterationCapReportsFailure) {
    const auto A = p1_operator(unit_square_mesh(8), 1e-3);
    std::vector<double> b(A.size(), 1.0);
    const auto [x, stats] = cg_solve(A, b, {1e-12, 2});
    EXPECT_FALSE(stats.converged);
    EXPECT_EQ(stats.iterations, 2u);
    EXPECT_GT(stats.final_relative_residual, 1e-12);
}

// A posteriori residual on random SPD assemblies: random meshes sizes,
// shifts, Dirichlet sets and right-hand sides.
TEST(Cg, RandomSpdAssembliesMeetTolerance) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int M = 2 + static_cast<int>(rng() % 10);
        const auto mesh = trial % 5 == 4 ? unit_cube_mesh(1 + M / 4) : unit_square_mesh(M);
        auto A = p1_operator(mesh, std::exp(4.0 * u(rng)));
        std::vector<double> b(A.size());
        for (auto& v : b) {
            v = u(rng);
        }
        std::vector<DirichletConstraint> bc;
        for (auto i : mesh.boundary_nodes) {
            if (rng() % 3 == 0) {
                bc.push_back({i, u(rng)});
            }
        }
        apply_dirichlet(A, b, bc);
        const double tol = trial % 2 ? 1e-10 : 1e-8;
        const auto [x, stats] = cg_solve(A, b, {tol, 0});
        ASSERT_TRUE(stats.converged) << "trial " << trial;
        EXPECT_LE(norm2(residual(A, x, b)) / norm2(b), tol) << "trial " << trial;
        EXPECT_NEAR(stats.final_relative_residual, norm2(residual(A, x, b)) / norm2(b), 1e-14);
    }
}

TEST(VectorOps, DotAndNorm) {
    const std::vector<double> a{3.0, 4.0}, b{1.0, -1.0};
    EXPECT_DOUBLE_EQ(dot(a, b), -1.0);
    EXPECT_DOUBLE_EQ(norm2(a), 5.0);
}
