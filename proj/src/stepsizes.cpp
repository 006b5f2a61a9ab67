#include "qterm/stepsizes.hpp"

#include <algorithm>
#include <cmath>

#include "qterm/vec.hpp"

namespace qterm {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveCurvature: return "non-positive curvature";
    case ErrorCode::ZeroDenominator: return "zero denominator";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::LinearDependence: return "linear dependence";
    case ErrorCode::NumericalFailure: return "numerical failure";
    case ErrorCode::NonDescentDirection: return "non-descent direction";
    case ErrorCode::LineSearchFailure: return "line search failure";
    case ErrorCode::InvalidSpec: return "invalid spec";
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown";
}

StepPair StepPair::from_vectors(std::span<const double> s, std::span<const double> y) {
  return StepPair{dot(s, s), dot(s, y), dot(y, y)};
}

Result<double> bb1(const StepPair& pair) {
  if (!(pair.s_dot_y > 0.0)) return ErrorCode::NonPositiveCurvature;
  const double a = pair.s_dot_s / pair.s_dot_y;
  if (!std::isfinite(a) || a <= 0.0) return ErrorCode::NonPositiveCurvature;
  return a;
}

Result<double> bb2(const StepPair& pair) {
  if (!(pair.s_dot_y > 0.0)) return ErrorCode::NonPositiveCurvature;
  const double a = pair.s_dot_y / pair.y_dot_y;
  if (!std::isfinite(a) || a <= 0.0) return ErrorCode::NonPositiveCurvature;
  return a;
}

Result<double> sd_stepsize(std::span<const double> g, std::span<const double> hess_g) {
  const double curv = dot(g, hess_g);
  if (!(curv > 0.0)) return ErrorCode::NonPositiveCurvature;
  return dot(g, g) / curv;
}

Result<double> day_stepsize(const StepPair& pair) {
  if (!(pair.y_dot_y > 0.0)) return ErrorCode::ZeroDenominator;
  return std::sqrt(pair.s_dot_s / pair.y_dot_y);
}

Result<BbqRatios> bbq_ratios(double bb1_prev, double bb1_cur, double bb2_prev,
                             double bb2_cur) {
  const double gap = bb1_prev - bb1_cur;
  if (!(std::abs(gap) > kBbqEqualTol * std::max(std::abs(bb1_prev), std::abs(bb1_cur))))
    return ErrorCode::Degenerate;
  const double den = bb2_prev * bb2_cur * gap;
  BbqRatios r;
  r.phi1_over_phi3 = (bb2_prev - bb2_cur) / den;
  r.phi2_over_phi3 = (bb1_prev * bb2_prev - bb1_cur * bb2_cur) / den;
  r.discriminant = r.phi2_over_phi3 * r.phi2_over_phi3 - 4.0 * r.phi1_over_phi3;
  if (!std::isfinite(r.phi1_over_phi3) || !std::isfinite(r.phi2_over_phi3))
    return ErrorCode::Degenerate;
  return r;
}

Result<double> bbq_stepsize(double bb1_prev, double bb1_cur, double bb2_prev,
                            double bb2_cur) {
  for (double v : {bb1_prev, bb1_cur, bb2_prev, bb2_cur})
    if (!(v > 0.0) || !std::isfinite(v)) return ErrorCode::Degenerate;
  const auto ratios = bbq_ratios(bb1_prev, bb1_cur, bb2_prev, bb2_cur);
  if (!ratios) return ratios.error();
  if (ratios->discriminant < 0.0) return ErrorCode::Degenerate;
  const double den = ratios->phi2_over_phi3 + std::sqrt(ratios->discriminant);
  if (!(den > 0.0)) return ErrorCode::Degenerate;
  const double alpha = 2.0 / den;
  if (!std::isfinite(alpha) || alpha <= 0.0) return ErrorCode::Degenerate;
  return alpha;
}

}  // namespace qterm
