#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfem/fem_basis.hpp"
#include "pfem/lagrange_space.hpp"
#include "pfem/mesh.hpp"
#include "pfem/problem.hpp"
#include "pfem/sparse.hpp"

namespace pfem {

/// A: source fully lagged at U^n.
/// B: source linearized about U^n; the reaction part d g/d u enters the
///    matrix, the gradient part stays lagged so the system remains symmetric.
enum class Scheme { A, B };

enum class InitMode { interpolation, ritz };

/// Time level at which the explicit source g(U^n, grad U^n, x, t) and the
/// forcing f are evaluated.
enum class SourceTime { current, next };

struct SchemeOptions {
    SourceTime source_time = SourceTime::next;
    /// Smallest admissible diffusivity at the discrete solution.
    double ellipticity_floor = 1e-8;
    /// Step for the central difference of g in its solution argument (scheme B).
    double source_derivative_step = 1e-6;
};

/// Discrete solution U_h^n. `values` is component-major: component c
/// occupies [c * dof_count, (c + 1) * dof_count).
struct DiscreteState {
    std::size_t step = 0;
    double time = 0.0;
    double tau = 0.0;
    std::vector<double> values;
    /// max |U_h| and max |grad U_h| over quadrature points and components.
    double monitor_linf = 0.0;
    double monitor_w1inf = 0.0;
    /// CG iterations spent producing this state (summed over components).
    std::size_t cg_iterations = 0;
};

/// One linear system per solution component (the systems decouple).
struct StepSystem {
    std::vector<LinearSystem> components;
};

/// Fully discrete linearized backward Euler Galerkin method for one
/// problem on one mesh.
class Discretization {
public:
    Discretization(const ProblemSpec& spec, const Mesh& mesh, int degree, SchemeOptions options = {});

    [[nodiscard]] const ProblemSpec& problem() const { return *spec_; }
    [[nodiscard]] const LagrangeSpace& space() const { return space_; }
    [[nodiscard]] const CsrMatrix& mass_matrix() const { return mass_; }
    [[nodiscard]] std::size_t dof_count() const { return space_.dof_count(); }
    [[nodiscard]] int components() const { return spec_->components; }

    /// U^0 from the exact solution at t = 0: nodal interpolation, or the
    /// Ritz projection with coefficient kappa evaluated at the interpolant.
    [[nodiscard]] DiscreteState initialize(InitMode mode, double tau, const CgOptions& cg = {}) const;

    /// State built from explicit nodal values at step 0 (boundary values untouched).
    [[nodiscard]] DiscreteState make_state(std::vector<double> values, double tau) const;

    /// Linear systems for U^{n+1}, Dirichlet data at `t_next` already applied.
    [[nodiscard]] StepSystem assemble_step(Scheme scheme, const DiscreteState& state, double t_next) const;

    /// Same as `assemble_step` but before Dirichlet elimination.
    [[nodiscard]] StepSystem assemble_step_unconstrained(Scheme scheme, const DiscreteState& state,
                                                         double t_next) const;

    [[nodiscard]] DiscreteState advance(Scheme scheme, const DiscreteState& state, const CgOptions& cg = {}) const;

    /// Dirichlet data on boundary dofs at time t for one component.
    [[nodiscard]] std::vector<DirichletConstraint> boundary_constraints(int component, double t) const;

    /// Recompute max |U_h| and max |grad U_h| over assembly quadrature points.
    void update_monitors(DiscreteState& state) const;

private:
    struct CellFrame;

    void load_cell(std::size_t cell, std::span<const double> values, CellFrame& frame) const;
    void assemble_into(Scheme scheme, const DiscreteState& state, double t_next, StepSystem& system) const;

    const ProblemSpec* spec_;
    const Mesh* mesh_;
    SchemeOptions options_;
    LagrangeSpace space_;
    QuadratureRule rule_;
    std::vector<double> phi_;     // [q * nloc + i]
    std::vector<Point> dphi_ref_; // [q * nloc + i]
    CsrMatrix pattern_;
    std::vector<std::size_t> cell_positions_;  // [cell * nloc^2 + i * nloc + j]
    CsrMatrix mass_;
};

}  // namespace pfem
