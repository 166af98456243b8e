#pragma once

#include <span>

#include "pfem/lagrange_space.hpp"
#include "pfem/problem.hpp"

namespace pfem {

/// L2 and full H1 norms of an error, summed over components.
struct ErrorPair {
    double l2 = 0.0;
    double h1 = 0.0;
};

/// || U_h - u(., t) || in L2 and H1 by element quadrature.
/// `quadrature_degree` = 0 selects 2r + 4.
ErrorPair error_norms(const ProblemSpec& spec, const LagrangeSpace& space, std::span<const double> values,
                      double t, int quadrature_degree = 0);

/// || a - b || in L2 and H1 for two functions of the same space.
ErrorPair discrete_distance(const LagrangeSpace& space, int components, std::span<const double> a,
                            std::span<const double> b);

/// log(e_coarse / e_fine) / log(h_coarse / h_fine).
double observed_rate(double h_coarse, double e_coarse, double h_fine, double e_fine);

}  // namespace pfem
