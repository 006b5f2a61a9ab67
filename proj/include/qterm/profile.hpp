#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qterm/csv.hpp"

namespace qterm {

enum class ProfileMetric { Iterations, Time };

ProfileMetric profile_metric_from_string(const std::string& name);

/// Dolan-More curve of one method: fraction[i] is the share of problems
/// whose ratio is <= rho[i]. rho is the sorted union of every method's
/// finite ratios, so all curves share breakpoints.
struct ProfileCurve {
  std::string method;
  std::vector<double> rho;
  std::vector<double> fraction;
};

/// A problem is a (problem, seed) pair; only status "ok" counts as solved.
/// Metric values are floored at 1 iteration or 1 microsecond so a
/// zero-cost solve still yields a finite ratio. A single method is
/// accepted (its curve is 1 at rho = 1). Throws Error(InvalidInput) for an
/// empty table or when the methods were not run on the same problems.
std::vector<ProfileCurve> performance_profile(const std::vector<RunRow>& rows, ProfileMetric metric);

/// Columns: method,rho,fraction.
void write_profile(std::ostream& os, const std::vector<ProfileCurve>& curves);

}  // namespace qterm
