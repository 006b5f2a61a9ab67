#pragma once

#include <span>

#include "qterm/result.hpp"

namespace qterm {

/// Inner products of one step: s = x_k - x_{k-1}, y = g_k - g_{k-1}.
/// Stepsize formulas only read the three scalars so callers that already
/// hold them never need the vectors.
struct StepPair {
  double s_dot_s = 0.0;
  double s_dot_y = 0.0;
  double y_dot_y = 0.0;

  static StepPair from_vectors(std::span<const double> s, std::span<const double> y);
};

struct BbqRatios {
  double phi1_over_phi3 = 0.0;
  double phi2_over_phi3 = 0.0;
  double discriminant = 0.0;
};

/// Relative threshold below which two consecutive BB1 values count as equal.
inline constexpr double kBbqEqualTol = 1e-12;

/// s's / s'y. NonPositiveCurvature when s'y <= 0.
Result<double> bb1(const StepPair& pair);
/// s'y / y'y. NonPositiveCurvature when s'y <= 0.
Result<double> bb2(const StepPair& pair);
/// Exact steepest-descent step g'g / g'Ag on a quadratic.
Result<double> sd_stepsize(std::span<const double> g, std::span<const double> hess_g);
/// ||s|| / ||y||.
Result<double> day_stepsize(const StepPair& pair);

/// Ratios phi1/phi3 and phi2/phi3 built from two consecutive BB1/BB2 pairs.
/// Degenerate when the BB1 values coincide (relative kBbqEqualTol).
Result<BbqRatios> bbq_ratios(double bb1_prev, double bb1_cur, double bb2_prev,
                             double bb2_cur);

/// Two-dimensional quadratic termination stepsize
///   2 / (phi2/phi3 + sqrt((phi2/phi3)^2 - 4 phi1/phi3)),
/// i.e. the reciprocal of the larger root of z^2 - (phi2/phi3) z + phi1/phi3.
/// Degenerate on equal BB1 values, a negative discriminant, or a
/// nonpositive / non-finite result.
Result<double> bbq_stepsize(double bb1_prev, double bb1_cur, double bb2_prev,
                            double bb2_cur);

}  // namespace qterm
