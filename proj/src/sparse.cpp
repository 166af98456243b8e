#include "pfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pfem {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::span<const Triplet> triplets) {
    std::vector<Triplet> sorted(triplets.begin(), triplets.end());
    for (const auto& t : sorted) {
        if (t.row >= n || t.col >= n) {
            throw std::out_of_range("CsrMatrix::from_triplets: index (" + std::to_string(t.row) + ", " +
                                    std::to_string(t.col) + ") out of range for n = " + std::to_string(n));
        }
    }
    // Sort by (row, col, value) so duplicate summation order is fixed.
    std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row != b.row) return a.row < b.row;
        if (a.col != b.col) return a.col < b.col;
        return a.value < b.value;
    });

    CsrMatrix m;
    m.n_ = n;
    m.row_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < sorted.size() && sorted[j].row == sorted[i].row && sorted[j].col == sorted[i].col) {
            sum += sorted[j].value;
            ++j;
        }
        m.cols_.push_back(sorted[i].col);
        m.values_.push_back(sum);
        ++m.row_offsets_[sorted[i].row + 1];
        i = j;
    }
    for (std::size_t r = 0; r < n; ++r) {
        m.row_offsets_[r + 1] += m.row_offsets_[r];
    }
    return m;
}

CsrMatrix CsrMatrix::from_pattern(const std::vector<std::vector<std::size_t>>& rows) {
    CsrMatrix m;
    m.n_ = rows.size();
    m.row_offsets_.assign(m.n_ + 1, 0);
    for (std::size_t r = 0; r < m.n_; ++r) {
        for (std::size_t k = 0; k < rows[r].size(); ++k) {
            if (rows[r][k] >= m.n_ || (k > 0 && rows[r][k] <= rows[r][k - 1])) {
                throw std::invalid_argument("CsrMatrix::from_pattern: row " + std::to_string(r) +
                                            " is not sorted, unique, and in range");
            }
        }
        m.cols_.insert(m.cols_.end(), rows[r].begin(), rows[r].end());
        m.row_offsets_[r + 1] = m.cols_.size();
    }
    m.values_.assign(m.cols_.size(), 0.0);
    return m;
}

std::size_t CsrMatrix::position(std::size_t row, std::size_t col) const {
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) {
        return npos;
    }
    return static_cast<std::size_t>(it - cols_.begin());
}

double CsrMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= n_ || col >= n_) {
        throw std::out_of_range("CsrMatrix::at: index out of range");
    }
    const auto p = position(row, col);
    return p == npos ? 0.0 : values_[p];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw std::invalid_argument("CsrMatrix::multiply: vector size mismatch");
    }
    for (std::size_t r = 0; r < n_; ++r) {
        double s = 0.0;
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            s += values_[k] * x[cols_[k]];
        }
        y[r] = s;
    }
}

std::vector<double> CsrMatrix::operator*(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        const auto p = position(r, r);
        if (p != npos) {
            d[r] = values_[p];
        }
    }
    return d;
}

bool CsrMatrix::structurally_symmetric() const {
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
            if (position(cols_[k], r) == npos) {
                return false;
            }
        }
    }
    return true;
}

void CsrMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

void CsrMatrix::add_scaled(double alpha, const CsrMatrix& other) {
    if (other.cols_ != cols_ || other.row_offsets_ != row_offsets_) {
        throw std::invalid_argument("CsrMatrix::add_scaled: sparsity patterns differ");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        values_[k] += alpha * other.values_[k];
    }
}

void apply_dirichlet(CsrMatrix& matrix, std::span<double> rhs,
                     std::span<const DirichletConstraint> constraints) {
    const std::size_t n = matrix.size();
    if (rhs.size() != n) {
        throw std::invalid_argument("apply_dirichlet: rhs size mismatch");
    }
    std::vector<char> fixed(n, 0);
    std::vector<double> value(n, 0.0);
    for (const auto& c : constraints) {
        if (c.index >= n) {
            throw std::out_of_range("apply_dirichlet: constraint index " + std::to_string(c.index) +
                                    " out of range");
        }
        if (matrix.position(c.index, c.index) == CsrMatrix::npos) {
            throw std::invalid_argument("apply_dirichlet: constrained row " + std::to_string(c.index) +
                                        " has no diagonal entry");
        }
        fixed[c.index] = 1;
        value[c.index] = c.value;
    }
    const auto& offsets = matrix.row_offsets();
    const auto& cols = matrix.column_indices();
    auto& vals = matrix.values();
    for (std::size_t r = 0; r < n; ++r) {
        if (fixed[r]) {
            for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
                vals[k] = cols[k] == r ? 1.0 : 0.0;
            }
            rhs[r] = value[r];
            continue;
        }
        for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
            if (fixed[cols[k]]) {
                rhs[r] -= vals[k] * value[cols[k]];
                vals[k] = 0.0;
            }
        }
    }
}

LinearSystem apply_dirichlet(LinearSystem system, std::span<const DirichletConstraint> constraints) {
    apply_dirichlet(system.matrix, system.rhs, constraints);
    return system;
}

SolveStats cg_solve(const CsrMatrix& matrix, std::span<const double> rhs, std::span<double> x,
                    const CgOptions& options) {
    const std::size_t n = matrix.size();
    if (rhs.size() != n || x.size() != n) {
        throw std::invalid_argument("cg_solve: vector size mismatch");
    }
    const std::size_t max_iter = options.max_iter ? options.max_iter : 10 * std::max<std::size_t>(n, 1);

    std::vector<double> inv_diag = matrix.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(inv_diag[i] > 0.0)) {
            throw std::domain_error("cg_solve: non-positive diagonal entry at row " + std::to_string(i));
        }
        inv_diag[i] = 1.0 / inv_diag[i];
    }

    SolveStats stats;
    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        stats.converged = true;
        return stats;
    }

    std::vector<double> r(n), z(n), p(n), ap(n);
    auto true_residual = [&] {
        matrix.multiply(x, ap);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = rhs[i] - ap[i];
        }
        return norm2(r) / bnorm;
    };

    stats.final_relative_residual = true_residual();
    if (stats.final_relative_residual <= options.tol) {
        stats.converged = true;
        return stats;
    }

    auto restart = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        p = z;
        return dot(r, z);
    };
    double rz = restart();

    while (stats.iterations < max_iter) {
        matrix.multiply(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) {
            // Not positive definite along p.
            break;
        }
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        ++stats.iterations;

        if (norm2(r) / bnorm <= options.tol) {
            stats.final_relative_residual = true_residual();
            if (stats.final_relative_residual <= options.tol) {
                stats.converged = true;
                return stats;
            }
            rz = restart();
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = inv_diag[i] * r[i];
        }
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = z[i] + beta * p[i];
        }
    }
    stats.final_relative_residual = true_residual();
    stats.converged = stats.final_relative_residual <= options.tol;
    return stats;
}

CgResult cg_solve(const CsrMatrix& matrix, std::span<const double> rhs, const CgOptions& options) {
    CgResult result{std::vector<double>(matrix.size(), 0.0), {}};
    result.stats = cg_solve(matrix, rhs, result.x, options);
    return result;
}

}  // namespace pfem
