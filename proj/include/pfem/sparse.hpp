#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pfem {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Square matrix in compressed-row storage. Column indices are strictly
/// increasing within each row.
class CsrMatrix {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    CsrMatrix() = default;

    /// Sum duplicates; the result does not depend on triplet order.
    static CsrMatrix from_triplets(std::size_t n, std::span<const Triplet> triplets);

    /// Zero-valued matrix with the given sparsity. Each row list must be
    /// sorted and duplicate-free.
    static CsrMatrix from_pattern(const std::vector<std::vector<std::size_t>>& rows);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }

    [[nodiscard]] const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    [[nodiscard]] const std::vector<std::size_t>& column_indices() const { return cols_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::vector<double>& values() { return values_; }

    /// Storage position of (row, col), or npos if structurally absent.
    [[nodiscard]] std::size_t position(std::size_t row, std::size_t col) const;
    [[nodiscard]] double at(std::size_t row, std::size_t col) const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> operator*(std::span<const double> x) const;

    [[nodiscard]] std::vector<double> diagonal() const;
    [[nodiscard]] bool structurally_symmetric() const;

    void set_zero();
    /// this += alpha * other; both must share the same sparsity.
    void add_scaled(double alpha, const CsrMatrix& other);

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> cols_;
    std::vector<double> values_;
};

struct DirichletConstraint {
    std::size_t index;
    double value;
};

struct LinearSystem {
    CsrMatrix matrix;
    std::vector<double> rhs;
};

/// Symmetric elimination of prescribed values: constrained rows and columns
/// are zeroed, their diagonal set to one, and the known values moved to the
/// right-hand side. Later constraints on the same index win.
void apply_dirichlet(CsrMatrix& matrix, std::span<double> rhs,
                     std::span<const DirichletConstraint> constraints);

LinearSystem apply_dirichlet(LinearSystem system, std::span<const DirichletConstraint> constraints);

struct CgOptions {
    double tol = 1e-10;
    /// 0 means 10 * n.
    std::size_t max_iter = 0;
};

struct SolveStats {
    std::size_t iterations = 0;
    double final_relative_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients. `x` holds the initial guess
/// on entry. Convergence is judged on the recomputed residual ||b - Ax||/||b||.
SolveStats cg_solve(const CsrMatrix& matrix, std::span<const double> rhs, std::span<double> x,
                    const CgOptions& options = {});

struct CgResult {
    std::vector<double> x;
    SolveStats stats;
};

CgResult cg_solve(const CsrMatrix& matrix, std::span<const double> rhs, const CgOptions& options = {});

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace pfem
