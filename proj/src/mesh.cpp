#include "pfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace pfem {

namespace {

double distance(const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    const double dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double determinant(int dim, const Matrix3& m) {
    if (dim == 2) {
        return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Matrix3 jacobian_of(int dim, const std::array<Point, 4>& v) {
    Matrix3 jac{};
    for (int col = 0; col < dim; ++col) {
        for (int row = 0; row < dim; ++row) {
            jac[row][col] = v[col + 1][row] - v[0][row];
        }
    }
    return jac;
}

double signed_volume(int dim, const std::vector<Point>& nodes, const Cell& cell) {
    std::array<Point, 4> v{};
    for (int k = 0; k <= dim; ++k) {
        v[k] = nodes[cell[k]];
    }
    return determinant(dim, jacobian_of(dim, v));
}

void validate_size(int M, const char* what) {
    if (M < 1) {
        throw std::domain_error(std::string(what) + ": M must be >= 1, got " + std::to_string(M));
    }
}

}  // namespace

std::string to_string(DomainTag tag) {
    switch (tag) {
        case DomainTag::square: return "square";
        case DomainTag::disk: return "disk";
        case DomainTag::cube: return "cube";
    }
    return "unknown";
}

Point ElementGeometry::map(const Point& xi) const {
    Point x = vertex_coords[0];
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) {
            x[row] += jacobian[row][col] * xi[col];
        }
    }
    return x;
}

Point ElementGeometry::push_gradient(const Point& ref_grad) const {
    Point g{};
    for (int row = 0; row < dim; ++row) {
        double s = 0.0;
        for (int col = 0; col < dim; ++col) {
            s += jacobian_inv_t[row][col] * ref_grad[col];
        }
        g[row] = s;
    }
    return g;
}

ElementGeometry simplex_geometry(int dim, const std::array<Point, 4>& vertices) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("simplex_geometry: dim must be 2 or 3");
    }
    ElementGeometry geo;
    geo.dim = dim;
    geo.vertex_coords = vertices;
    geo.jacobian = jacobian_of(dim, vertices);
    const double det = determinant(dim, geo.jacobian);

    double scale = 0.0;
    for (int a = 0; a <= dim; ++a) {
        for (int b = a + 1; b <= dim; ++b) {
            scale = std::max(scale, distance(vertices[a], vertices[b]));
        }
    }
    if (!(std::abs(det) > 1e-12 * std::pow(scale, dim))) {
        throw std::domain_error("simplex_geometry: degenerate simplex (zero measure)");
    }
    geo.det_jacobian = std::abs(det);
    geo.measure = geo.det_jacobian / (dim == 2 ? 2.0 : 6.0);

    const auto& J = geo.jacobian;
    auto& Jit = geo.jacobian_inv_t;
    if (dim == 2) {
        // inverse transpose of [[a b][c d]] is [[d -c][-b a]] / det
        Jit[0][0] = J[1][1] / det;
        Jit[0][1] = -J[1][0] / det;
        Jit[1][0] = -J[0][1] / det;
        Jit[1][1] = J[0][0] / det;
    } else {
        // cofactor matrix divided by det
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                const int r1 = (r + 1) % 3, r2 = (r + 2) % 3;
                const int c1 = (c + 1) % 3, c2 = (c + 2) % 3;
                Jit[r][c] = (J[r1][c1] * J[r2][c2] - J[r1][c2] * J[r2][c1]) / det;
            }
        }
    }
    return geo;
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t cell_index) {
    if (cell_index >= mesh.cells.size()) {
        throw std::out_of_range("element_geometry: cell index " + std::to_string(cell_index) +
                                " out of range (" + std::to_string(mesh.cells.size()) + " cells)");
    }
    std::array<Point, 4> v{};
    const auto& cell = mesh.cells[cell_index];
    for (int k = 0; k <= mesh.dim; ++k) {
        v[k] = mesh.nodes[cell[k]];
    }
    return simplex_geometry(mesh.dim, v);
}

Mesh make_mesh(int dim, std::vector<Point> nodes, std::vector<Cell> cells) {
    if (dim != 2 && dim != 3) {
        throw std::invalid_argument("make_mesh: dim must be 2 or 3");
    }
    Mesh mesh;
    mesh.dim = dim;
    mesh.nodes = std::move(nodes);
    mesh.cells = std::move(cells);
    const std::size_t nv = static_cast<std::size_t>(dim) + 1;

    for (auto& cell : mesh.cells) {
        for (std::size_t a = 0; a < nv; ++a) {
            if (cell[a] >= mesh.nodes.size()) {
                throw std::out_of_range("make_mesh: vertex index out of range");
            }
            for (std::size_t b = a + 1; b < nv; ++b) {
                if (cell[a] == cell[b]) {
                    throw std::invalid_argument("make_mesh: repeated vertex in cell");
                }
            }
        }
        if (signed_volume(dim, mesh.nodes, cell) < 0.0) {
            std::swap(cell[dim - 1], cell[dim]);
        }
        const auto geo = element_geometry(mesh, static_cast<std::size_t>(&cell - mesh.cells.data()));
        for (std::size_t a = 0; a < nv; ++a) {
            for (std::size_t b = a + 1; b < nv; ++b) {
                mesh.h = std::max(mesh.h, distance(geo.vertex_coords[a], geo.vertex_coords[b]));
            }
        }
    }

    // Facets seen once are boundary facets.
    std::vector<std::array<std::size_t, 3>> facets;
    facets.reserve(mesh.cells.size() * nv);
    for (const auto& cell : mesh.cells) {
        for (std::size_t skip = 0; skip < nv; ++skip) {
            std::array<std::size_t, 3> f{0, 0, 0};
            std::size_t k = 0;
            for (std::size_t a = 0; a < nv; ++a) {
                if (a != skip) {
                    f[k++] = cell[a];
                }
            }
            std::sort(f.begin(), f.begin() + dim);
            facets.push_back(f);
        }
    }
    std::sort(facets.begin(), facets.end());
    for (std::size_t i = 0; i < facets.size();) {
        std::size_t j = i;
        while (j < facets.size() && facets[j] == facets[i]) {
            ++j;
        }
        if (j - i == 1) {
            mesh.boundary_facets.push_back(facets[i]);
        } else if (j - i > 2) {
            throw std::invalid_argument("make_mesh: non-manifold facet shared by more than two cells");
        }
        i = j;
    }
    for (const auto& f : mesh.boundary_facets) {
        for (int k = 0; k < dim; ++k) {
            mesh.boundary_nodes.push_back(f[k]);
        }
    }
    std::sort(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end());
    mesh.boundary_nodes.erase(std::unique(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end()),
                              mesh.boundary_nodes.end());
    return mesh;
}

Mesh unit_square_mesh(int M) {
    validate_size(M, "unit_square_mesh");
    const std::size_t n = static_cast<std::size_t>(M) + 1;
    std::vector<Point> nodes;
    nodes.reserve(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            nodes.push_back({static_cast<double>(i) / M, static_cast<double>(j) / M, 0.0});
        }
    }
    std::vector<Cell> cells;
    cells.reserve(2 * static_cast<std::size_t>(M) * M);
    auto id = [n](std::size_t i, std::size_t j) { return j * n + i; };
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            cells.push_back({a, b, c, 0});
            cells.push_back({a, c, d, 0});
        }
    }
    return make_mesh(2, std::move(nodes), std::move(cells));
}

Mesh unit_cube_mesh(int M) {
    validate_size(M, "unit_cube_mesh");
    const std::size_t n = static_cast<std::size_t>(M) + 1;
    std::vector<Point> nodes;
    nodes.reserve(n * n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                nodes.push_back({static_cast<double>(i) / M, static_cast<double>(j) / M,
                                 static_cast<double>(k) / M});
            }
        }
    }
    auto id = [n](std::size_t i, std::size_t j, std::size_t k) { return (k * n + j) * n + i; };
    // Each permutation of the axes gives one monotone path from the lower
    // corner to the upper corner of the cube: the six Kuhn tetrahedra.
    constexpr std::array<std::array<int, 3>, 6> perms{{
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::vector<Cell> cells;
    cells.reserve(6 * static_cast<std::size_t>(M) * M * M);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        for (std::size_t j = 0; j + 1 < n; ++j) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                for (const auto& p : perms) {
                    std::array<std::size_t, 3> c{i, j, k};
                    Cell cell{};
                    cell[0] = id(c[0], c[1], c[2]);
                    for (int step = 0; step < 3; ++step) {
                        ++c[p[step]];
                        cell[step + 1] = id(c[0], c[1], c[2]);
                    }
                    cells.push_back(cell);
                }
            }
        }
    }
    return make_mesh(3, std::move(nodes), std::move(cells));
}

Mesh unit_disk_mesh(int M) {
    if (M < 8 || M % 8 != 0) {
        throw std::domain_error("unit_disk_mesh: M must be a positive multiple of 8, got " +
                                std::to_string(M));
    }
    const int rings = M / 8;
    std::vector<Point> nodes;
    nodes.push_back({0.0, 0.0, 0.0});
    std::vector<std::size_t> ring_start{0};
    std::vector<std::size_t> ring_size{1};
    for (int k = 1; k <= rings; ++k) {
        const double radius = static_cast<double>(k) / rings;
        const int count = 8 * k;
        ring_start.push_back(nodes.size());
        ring_size.push_back(static_cast<std::size_t>(count));
        for (int j = 0; j < count; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / count;
            if (k == rings) {
                nodes.push_back({std::cos(theta), std::sin(theta), 0.0});
            } else {
                nodes.push_back({radius * std::cos(theta), radius * std::sin(theta), 0.0});
            }
        }
    }

    std::vector<Cell> cells;
    for (int k = 1; k <= rings; ++k) {
        const std::size_t ni = ring_size[k - 1], no = ring_size[k];
        const std::size_t si = ring_start[k - 1], so = ring_start[k];
        if (k == 1) {
            for (std::size_t j = 0; j < no; ++j) {
                cells.push_back({0, so + j, so + (j + 1) % no, 0});
            }
            continue;
        }
        // Sweep both rings by angle, always advancing along the ring whose
        // next node comes first. Ties advance the outer ring.
        std::size_t i = 0, j = 0;
        while (i < ni || j < no) {
            const bool advance_outer =
                i == ni || (j < no && (j + 1) * ni <= (i + 1) * no);
            if (advance_outer) {
                cells.push_back({si + i % ni, so + j % no, so + (j + 1) % no, 0});
                ++j;
            } else {
                cells.push_back({si + i % ni, so + j % no, si + (i + 1) % ni, 0});
                ++i;
            }
        }
    }
    return make_mesh(2, std::move(nodes), std::move(cells));
}

double total_measure(const Mesh& mesh) {
    double sum = 0.0;
    for (std::size_t e = 0; e < mesh.cells.size(); ++e) {
        sum += element_geometry(mesh, e).measure;
    }
    return sum;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << mesh.dim << ' ' << mesh.nodes.size() << ' ' << mesh.cells.size() << '\n';
    out.precision(17);
    for (const auto& p : mesh.nodes) {
        for (int d = 0; d < mesh.dim; ++d) {
            out << (d ? " " : "") << p[d];
        }
        out << '\n';
    }
    for (const auto& c : mesh.cells) {
        for (int k = 0; k <= mesh.dim; ++k) {
            out << (k ? " " : "") << c[k];
        }
        out << '\n';
    }
    for (std::size_t i = 0; i < mesh.boundary_nodes.size(); ++i) {
        out << (i ? " " : "") << mesh.boundary_nodes[i];
    }
    out << '\n';
    if (!out) {
        throw std::runtime_error("write_mesh: stream write failed");
    }
}

}  // namespace pfem
