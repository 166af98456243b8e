#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pfem/jet.hpp"
#include "pfem/mesh.hpp"

namespace pfem {

enum class BoundaryKind { homogeneous, exact_trace };

/// Diffusivity as a function of the solution value, with a Jet overload
/// used for exact derivatives.
struct Coefficient {
    std::function<double(double)> value;
    std::function<Jet(const Jet&)> jet;

    double operator()(double u) const { return value(u); }
};

/// Exact solution u(x, t) with one output per component.
struct ExactSolution {
    std::function<void(const Point&, double, std::span<double>)> value;
    std::function<void(const std::array<Jet, 3>&, const Jet&, std::span<Jet>)> jet;
};

/// Source g(u, grad u, x, t). `grad` holds three entries per component
/// (unused trailing entries are zero in 2D).
using SourceFn = std::function<void(std::span<const double> u, std::span<const double> grad,
                                    const Point& x, double t, std::span<double> out)>;

/// A nonlinear parabolic problem
///     u_t - div(kappa(u) grad u) = g(u, grad u, x, t) + f(x, t)
/// with f induced by the exact solution.
struct ProblemSpec {
    std::string name;
    int dim = 2;
    int components = 1;
    DomainTag domain = DomainTag::square;
    BoundaryKind boundary = BoundaryKind::homogeneous;
    double final_time = 1.0;
    Coefficient kappa;
    SourceFn source;
    ExactSolution exact;
};

/// Wrap a generic callable `f(s)` usable with both double and Jet.
template <class F>
Coefficient make_coefficient(F f) {
    return {[f](double u) { return f(u); }, [f](const Jet& u) { return f(u); }};
}

/// Wrap a generic callable `f(x, t, out)` where x is std::array<S, 3>,
/// t is S and out is std::span<S>, for S = double and S = Jet.
template <class F>
ExactSolution make_exact(F f) {
    return {[f](const Point& x, double t, std::span<double> out) { f(x, t, out); },
            [f](const std::array<Jet, 3>& x, const Jet& t, std::span<Jet> out) { f(x, t, out); }};
}

inline constexpr int kMaxComponents = 3;

/// Exact value and derivatives of the exact solution at one space-time point.
/// Only the first `components` entries (3 per component for gradients) are set.
struct ExactDerivatives {
    std::array<double, kMaxComponents> value{};
    std::array<double, 3 * kMaxComponents> gradient{};
    std::array<double, kMaxComponents> laplacian{};
    std::array<double, kMaxComponents> time_derivative{};
};

ExactDerivatives exact_derivatives(const ProblemSpec& spec, const Point& x, double t);

/// Manufactured forcing f = u_t - div(kappa(u) grad u) - g, evaluated with
/// exact (jet) derivatives of the exact solution.
void exact_forcing(const ProblemSpec& spec, const Point& x, double t, std::span<double> out);

struct FdStencil {
    double space_step = 1e-4;
    double time_step = 1e-5;
};

/// Manufactured forcing evaluated by second-order finite differences of the
/// exact solution. Independent of the jet path; one-sided differences are
/// used where a central stencil would leave the domain.
void manufactured_forcing(const ProblemSpec& spec, const FdStencil& stencil, const Point& x, double t,
                          std::span<double> out);

/// Closed-domain membership test for the problem's domain.
bool domain_contains(DomainTag domain, const Point& x);

/// d g_c / d u_c by central differences with step `step`.
double source_self_derivative(const ProblemSpec& spec, std::span<const double> u, std::span<const double> grad,
                              const Point& x, double t, int component, double step = 1e-6);

/// Example 1: u_t - Lap u = |grad u|^4 / (1 + u) + f on the unit square.
ProblemSpec example_1();
/// Example 2: Burgers system u_t + (u . grad) u - Lap u = f on the unit disk.
ProblemSpec example_2();
/// Example 3: u_t - div((1 + sin^2 u) grad u) = |grad u|^4 / (1 + u) + f on the unit cube.
ProblemSpec example_3();

ProblemSpec builtin_example(int number);

}  // namespace pfem
