#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "qterm/result.hpp"

namespace qterm {

struct LineSearchResult {
  double lambda = 0.0;
  std::size_t nfe = 0;
  double f_new = 0.0;
};

/// Nonmonotone backtracking: returns lambda = alpha0 * eta^j for the
/// smallest j >= 0 with
///   f(x + lambda d) <= f_r + delta * lambda * g'd.
/// A non-finite trial value counts as a rejection. NonDescentDirection when
/// g'd >= 0; LineSearchFailure when j would exceed max_backtracks. When
/// x_out is non-empty it receives the accepted point.
Result<LineSearchResult> dai_fletcher_search(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    std::span<const double> g, std::span<const double> d, double alpha0, double f_r,
    double delta, double eta, std::size_t max_backtracks, std::span<double> x_out = {});

/// Reference value bookkeeping for the nonmonotone search.
///   f_min: best value so far, f_c: largest value since f_min was found,
///   t: iterations since f_min improved, threshold: T.
struct ReferenceState {
  double f_r = 0.0;
  double f_min = 0.0;
  double f_c = 0.0;
  std::size_t t = 0;
  std::size_t threshold = 3;

  static ReferenceState init(double f1, std::size_t threshold) {
    return ReferenceState{f1, f1, f1, 0, threshold};
  }
};

/// if f_k < f_min: f_min = f_c = f_k, t = 0
/// else: f_c = max(f_c, f_k), t += 1; on t == T: f_r = f_c, f_c = f_k, t = 0
ReferenceState update_reference(ReferenceState state, double f_k);

}  // namespace qterm
