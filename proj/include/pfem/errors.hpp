#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "pfem/mesh.hpp"

namespace pfem {

/// Invalid study or CLI configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A time step could not be completed.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
    [[nodiscard]] std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// The diffusivity evaluated at the discrete solution dropped to (near) zero.
class EllipticityError : public SolverError {
public:
    EllipticityError(const std::string& what, std::size_t step, const Point& where)
        : SolverError(what, step), where_(where) {}
    [[nodiscard]] const Point& where() const { return where_; }

private:
    Point where_;
};

}  // namespace pfem
