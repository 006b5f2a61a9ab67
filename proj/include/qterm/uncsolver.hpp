#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "qterm/objective.hpp"
#include "qterm/report.hpp"

namespace qterm {

/// Stepsize rule used between line searches.
///   Alg1: long bb1 / short min{bb2, bb2, alpha_new} adaptive scheme
///   Bbq:  same frame, alpha_bbq as the short candidate
///   Bb1:  plain bb1 (globalized BB)
enum class UncMethod { Alg1, Bbq, Bb1 };

const char* to_string(UncMethod m) noexcept;

struct UncSolverConfig {
  double alpha_min = 1e-10;
  double alpha_max = 1e6;
  std::size_t T = 3;
  double delta = 1e-4;
  double eta = 0.5;
  double tau1 = 0.65;
  double gamma = 1.4;
  double eps_inf = 1e-6;  // stop once ||g||_inf <= eps_inf
  std::size_t max_iter = 200000;
  std::size_t max_backtracks = 60;
  std::size_t max_fevals = 1000000;
  UncMethod method = UncMethod::Alg1;
  /// Overrides the ||x||_inf / ||g||_inf first trial step.
  std::optional<double> alpha1;
  bool trace = false;

  void validate() const;
};

/// Gradient method with the nonmonotone line search for general smooth f.
/// The report's final_gnorm is ||g||_inf.
RunReport solve(const ObjectiveFn& f, std::span<const double> x0, const UncSolverConfig& cfg);

}  // namespace qterm
