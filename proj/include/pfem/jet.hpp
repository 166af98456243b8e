#pragma once

#include <cmath>

namespace pfem {

/// Second-order univariate Taylor jet: value, first and second derivative
/// with respect to one seeded variable.
struct Jet {
    double v = 0.0;
    double d = 0.0;
    double dd = 0.0;

    constexpr Jet() = default;
    constexpr Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
    constexpr Jet(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}

    static constexpr Jet variable(double value) { return {value, 1.0, 0.0}; }

    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend constexpr Jet operator+(const Jet& a, const Jet& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
    friend constexpr Jet operator-(const Jet& a, const Jet& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
    friend constexpr Jet operator-(const Jet& a) { return {-a.v, -a.d, -a.dd}; }
    friend constexpr Jet operator*(const Jet& a, const Jet& b) {
        return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
    }
    friend constexpr Jet operator/(const Jet& a, const Jet& b) {
        const double inv = 1.0 / b.v;
        const Jet r{inv, -b.d * inv * inv, 2.0 * b.d * b.d * inv * inv * inv - b.dd * inv * inv};
        return a * r;
    }
};

/// Compose a scalar function with value f0, slope f1 and curvature f2 at a.v.
constexpr Jet chain(const Jet& a, double f0, double f1, double f2) {
    return {f0, f1 * a.d, f2 * a.d * a.d + f1 * a.dd};
}

/// Elementary functions overloaded for double and Jet so exact solutions
/// can be written once as generic lambdas.
namespace math {

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double sech(double x) { return 1.0 / std::cosh(x); }

inline Jet sin(const Jet& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return chain(a, c, -s, -c);
}
inline Jet exp(const Jet& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
}
inline Jet cosh(const Jet& a) {
    const double c = std::cosh(a.v), s = std::sinh(a.v);
    return chain(a, c, s, c);
}
inline Jet sinh(const Jet& a) {
    const double c = std::cosh(a.v), s = std::sinh(a.v);
    return chain(a, s, c, s);
}
inline Jet sech(const Jet& a) {
    // sech' = -sech tanh, sech'' = sech (tanh^2 - sech^2)
    const double se = 1.0 / std::cosh(a.v), th = std::tanh(a.v);
    return chain(a, se, -se * th, se * (th * th - se * se));
}

}  // namespace math

}  // namespace pfem
