#include "pfem/lagrange_space.hpp"

#include <algorithm>
#include <utility>

namespace pfem {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

Edge make_edge(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

std::size_t edge_index(const std::vector<Edge>& edges, const Edge& e) {
    return static_cast<std::size_t>(std::lower_bound(edges.begin(), edges.end(), e) - edges.begin());
}

}  // namespace

LagrangeSpace::LagrangeSpace(const Mesh& mesh, int degree)
    : mesh_(&mesh), element_(mesh.dim, degree) {
    const std::size_t per_cell = element_.node_count();
    const std::size_t nv = static_cast<std::size_t>(mesh.dim) + 1;
    cell_dofs_.resize(mesh.cell_count() * per_cell);
    dof_points_ = mesh.nodes;
    boundary_dofs_ = mesh.boundary_nodes;

    if (degree == 1) {
        for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
            std::copy_n(mesh.cells[c].begin(), nv, cell_dofs_.begin() + c * per_cell);
        }
        return;
    }

    std::vector<Edge> edges;
    edges.reserve(mesh.cell_count() * element_.edges().size());
    for (const auto& cell : mesh.cells) {
        for (const auto& [a, b] : element_.edges()) {
            edges.push_back(make_edge(cell[a], cell[b]));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    const std::size_t offset = mesh.node_count();
    for (const auto& [a, b] : edges) {
        Point mid{};
        for (int d = 0; d < 3; ++d) {
            mid[d] = 0.5 * (mesh.nodes[a][d] + mesh.nodes[b][d]);
        }
        dof_points_.push_back(mid);
    }
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const auto& cell = mesh.cells[c];
        auto* dofs = cell_dofs_.data() + c * per_cell;
        std::copy_n(cell.begin(), nv, dofs);
        for (std::size_t e = 0; e < element_.edges().size(); ++e) {
            const auto [a, b] = element_.edges()[e];
            dofs[nv + e] = offset + edge_index(edges, make_edge(cell[a], cell[b]));
        }
    }

    for (const auto& facet : mesh.boundary_facets) {
        for (int a = 0; a < mesh.dim; ++a) {
            for (int b = a + 1; b < mesh.dim; ++b) {
                boundary_dofs_.push_back(offset + edge_index(edges, make_edge(facet[a], facet[b])));
            }
        }
    }
    std::sort(boundary_dofs_.begin(), boundary_dofs_.end());
    boundary_dofs_.erase(std::unique(boundary_dofs_.begin(), boundary_dofs_.end()), boundary_dofs_.end());
}

}  // namespace pfem
