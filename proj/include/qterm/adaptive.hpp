#pragma once

#include <optional>

#include "qterm/report.hpp"
#include "qterm/termination3d.hpp"

namespace qterm {

/// Quadratic: short steps fall back new -> bbq -> min of BB2 values.
/// General: the curvature-gated tree used with the nonmonotone line search,
///          where bbq is only tried when the older pair had nonpositive
///          curvature.
enum class ShortRule { Quadratic, General };

struct AdaptiveDecision {
  double alpha = 0.0;
  Branch branch = Branch::Bb1;
  bool short_step = false;
};

/// Chooses alpha_K for the iterate at lag 0 of hist from the long BB1 step
/// and a short step, switching on bb2_K / bb1_K < tau. With use_new false
/// the short step never tries alpha_new (the BBQ method).
/// nullopt when bb1_K or bb2_K is undefined.
std::optional<AdaptiveDecision> adaptive_step(const GradientHistory& hist, double tau,
                                              ShortRule rule, bool use_new);

/// Threshold update: tau / gamma after a short decision, tau * gamma otherwise.
inline double update_tau(double tau, double gamma, bool short_step) {
  return short_step ? tau / gamma : tau * gamma;
}

}  // namespace qterm
