#include "qterm/linesearch.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qterm/vec.hpp"

namespace qterm {

Result<LineSearchResult> dai_fletcher_search(
    const std::function<double(std::span<const double>)>& f, std::span<const double> x,
    std::span<const double> g, std::span<const double> d, double alpha0, double f_r,
    double delta, double eta, std::size_t max_backtracks, std::span<double> x_out) {
  const double slope = dot(g, d);
  if (!(slope < 0.0)) return ErrorCode::NonDescentDirection;
  if (!(alpha0 > 0.0)) throw Error(ErrorCode::InvalidInput, "line search: alpha0 must be positive");

  std::vector<double> trial(x.size());
  double lambda = alpha0;
  for (std::size_t j = 0; j <= max_backtracks; ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + lambda * d[i];
    const double f_trial = f(trial);
    if (std::isfinite(f_trial) && f_trial <= f_r + delta * lambda * slope) {
      if (!x_out.empty()) std::copy(trial.begin(), trial.end(), x_out.begin());
      return LineSearchResult{lambda, j + 1, f_trial};
    }
    lambda *= eta;
  }
  return ErrorCode::LineSearchFailure;
}

ReferenceState update_reference(ReferenceState s, double f_k) {
  if (f_k < s.f_min) {
    s.f_min = f_k;
    s.f_c = f_k;
    s.t = 0;
  } else {
    s.f_c = std::max(s.f_c, f_k);
    s.t += 1;
    if (s.t == s.threshold) {
      s.f_r = s.f_c;
      s.f_c = f_k;
      s.t = 0;
    }
  }
  return s;
}

}  // namespace qterm
