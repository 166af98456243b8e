#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "pfem/fem_basis.hpp"
#include "pfem/mesh.hpp"

namespace pfem {

/// Continuous Lagrange space of degree 1 or 2 on a simplicial mesh.
///
/// Degree-1 dofs coincide with mesh nodes. Degree-2 dofs append one dof
/// per mesh edge, numbered after the nodes in sorted edge order.
class LagrangeSpace {
public:
    LagrangeSpace(const Mesh& mesh, int degree);

    [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
    [[nodiscard]] const ReferenceElement& element() const { return element_; }
    [[nodiscard]] int degree() const { return element_.degree(); }
    [[nodiscard]] std::size_t dof_count() const { return dof_points_.size(); }
    [[nodiscard]] std::size_t dofs_per_cell() const { return element_.node_count(); }

    [[nodiscard]] std::span<const std::size_t> cell_dofs(std::size_t cell) const {
        return {cell_dofs_.data() + cell * dofs_per_cell(), dofs_per_cell()};
    }
    [[nodiscard]] const std::vector<Point>& dof_points() const { return dof_points_; }
    /// Sorted dofs lying on the boundary of the mesh.
    [[nodiscard]] const std::vector<std::size_t>& boundary_dofs() const { return boundary_dofs_; }

    /// Nodal interpolant of `f` (one value per dof).
    template <class F>
    [[nodiscard]] std::vector<double> interpolate(F&& f) const {
        std::vector<double> values(dof_count());
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = f(dof_points_[i]);
        }
        return values;
    }

private:
    const Mesh* mesh_;
    ReferenceElement element_;
    std::vector<std::size_t> cell_dofs_;
    std::vector<Point> dof_points_;
    std::vector<std::size_t> boundary_dofs_;
};

}  // namespace pfem
