#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pfem {

using Point = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

enum class DomainTag { square, disk, cube };

std::string to_string(DomainTag tag);

/// Vertex indices of a simplex. Triangles use the first three slots.
using Cell = std::array<std::size_t, 4>;

/// Conforming simplicial mesh in 2D or 3D.
///
/// Only the first `dim` coordinates of each node are meaningful; the rest
/// are zero. Every cell is stored with positive orientation.
struct Mesh {
    int dim = 2;
    std::vector<Point> nodes;
    std::vector<Cell> cells;
    /// Sorted node indices lying on a facet owned by exactly one cell.
    std::vector<std::size_t> boundary_nodes;
    /// Facets owned by exactly one cell; each holds `dim` sorted node indices.
    std::vector<std::array<std::size_t, 3>> boundary_facets;
    /// Largest vertex-pair distance over all cells.
    double h = 0.0;

    [[nodiscard]] std::size_t node_count() const { return nodes.size(); }
    [[nodiscard]] std::size_t cell_count() const { return cells.size(); }
    [[nodiscard]] int vertices_per_cell() const { return dim + 1; }
};

/// Affine map x = x0 + J xi from the reference simplex onto one cell.
struct ElementGeometry {
    int dim = 2;
    std::array<Point, 4> vertex_coords{};
    Matrix3 jacobian{};
    Matrix3 jacobian_inv_t{};
    double measure = 0.0;
    /// |det J|; scales reference-simplex quadrature weights.
    double det_jacobian = 0.0;

    /// Physical point of reference coordinates `xi`.
    [[nodiscard]] Point map(const Point& xi) const;
    /// Push a reference-coordinate gradient to physical coordinates.
    [[nodiscard]] Point push_gradient(const Point& ref_grad) const;
};

/// Uniform right-triangle mesh of (0,1)^2 with M cells per side.
Mesh unit_square_mesh(int M);

/// Kuhn (6 tetrahedra per cube) mesh of (0,1)^3 with M cells per side.
Mesh unit_cube_mesh(int M);

/// Ring mesh of the unit disk with M equispaced boundary nodes.
///
/// Ring k of M/8 (k = 1..M/8) has radius 8k/M and 8k nodes, so the
/// outermost ring carries the M boundary nodes and the mesh is quasi-uniform.
Mesh unit_disk_mesh(int M);

/// Build a mesh from raw nodes and cells: normalizes orientation,
/// validates, and derives boundary data and h.
Mesh make_mesh(int dim, std::vector<Point> nodes, std::vector<Cell> cells);

ElementGeometry element_geometry(const Mesh& mesh, std::size_t cell_index);

/// Geometry of a single simplex given its vertices. Throws on degenerate input.
ElementGeometry simplex_geometry(int dim, const std::array<Point, 4>& vertices);

double total_measure(const Mesh& mesh);

/// Plain-text export: header `dim nodes cells`, node lines, cell lines,
/// and one line of boundary node indices.
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace pfem
