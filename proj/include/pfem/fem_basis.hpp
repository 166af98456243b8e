#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "pfem/mesh.hpp"

namespace pfem {

/// Lagrange element of degree 1 or 2 on the reference triangle
/// (0,0),(1,0),(0,1) or reference tetrahedron.
///
/// Local numbering: vertices first, then one node per edge in the order
/// given by `edges()`.
class ReferenceElement {
public:
    ReferenceElement(int dim, int degree);

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] std::size_t node_count() const { return local_nodes_.size(); }
    [[nodiscard]] const std::vector<Point>& local_nodes() const { return local_nodes_; }
    /// Vertex pairs carrying the edge nodes (empty for degree 1).
    [[nodiscard]] const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    [[nodiscard]] std::vector<double> shape_values(const Point& xi) const;
    /// Row j holds the reference gradient of shape function j.
    [[nodiscard]] std::vector<Point> shape_gradients(const Point& xi) const;

    void shape_values(const Point& xi, double* out) const;
    void shape_gradients(const Point& xi, Point* out) const;

private:
    void check_inside(const Point& xi) const;

    int dim_;
    int degree_;
    std::vector<Point> local_nodes_;
    std::vector<std::pair<int, int>> edges_;
};

struct QuadratureRule {
    int dim = 2;
    int exact_degree = 0;
    std::vector<Point> points;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

inline constexpr int kMaxQuadratureDegree = 12;

/// Quadrature on the reference simplex, exact for polynomials of total
/// degree <= `exact_degree`. Degrees 1 and 2 use the classical symmetric
/// rules; higher degrees use the conical (collapsed Gauss-Legendre) product.
QuadratureRule quadrature(int dim, int exact_degree);

/// Gauss-Legendre nodes and weights on [0,1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n);

}  // namespace pfem
