#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qterm/vec.hpp"

namespace qterm {

/// Smooth objective f: R^n -> R. value and gradient must agree, have no side
/// effects, be deterministic, and tolerate concurrent calls.
struct ObjectiveFn {
  std::string name;
  std::size_t dimension = 0;
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  Vector start;
};

/// Classic smooth test problems with their standard starting points:
/// Rosenbrock (n = 2 and extended n = 100), Powell singular, Beale, helical
/// valley, Wood, trigonometric, Broyden tridiagonal, Dixon-Price, sphere and
/// an ill-conditioned diagonal quadratic.
std::vector<ObjectiveFn> builtin_suite();

/// Looks up a builtin by name; throws Error(InvalidSpec) if unknown.
ObjectiveFn builtin_by_name(const std::string& name);

}  // namespace qterm
