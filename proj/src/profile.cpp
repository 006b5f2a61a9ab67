#include "qterm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <utility>

#include "qterm/result.hpp"

namespace qterm {

ProfileMetric profile_metric_from_string(const std::string& name) {
  if (name == "iter" || name == "iters" || name == "iterations") return ProfileMetric::Iterations;
  if (name == "time" || name == "time_ms") return ProfileMetric::Time;
  throw Error(ErrorCode::InvalidSpec, "unknown profile metric: " + name + " (expected iter or time)");
}

std::vector<ProfileCurve> performance_profile(const std::vector<RunRow>& rows,
                                              ProfileMetric metric) {
  if (rows.empty()) throw Error(ErrorCode::InvalidInput, "profile: run table has no rows");

  using ProblemKey = std::pair<std::string, std::uint64_t>;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // method -> problem -> cost (inf when unsolved)
  std::map<std::string, std::map<ProblemKey, double>> cost;
  for (const auto& r : rows) {
    double c = kInf;
    if (r.status == "ok") {
      c = metric == ProfileMetric::Iterations ? std::max(1.0, static_cast<double>(r.iters))
                                              : std::max(1e-3, r.time_ms);
    }
    auto [it, inserted] = cost[r.method].emplace(ProblemKey{r.problem, r.seed}, c);
    if (!inserted)
      throw Error(ErrorCode::InvalidInput,
                  "profile: duplicate row for method " + r.method + " on " + r.problem);
  }

  const auto& reference = cost.begin()->second;
  for (const auto& [method, table] : cost) {
    bool same = table.size() == reference.size();
    for (auto a = table.begin(), b = reference.begin(); same && a != table.end(); ++a, ++b)
      same = a->first == b->first;
    if (!same)
      throw Error(ErrorCode::InvalidInput,
                  "profile: method " + method + " was not run on the same problems as " +
                      cost.begin()->first);
  }

  std::map<ProblemKey, double> best;
  for (const auto& [key, c] : reference) best[key] = kInf;
  for (const auto& [method, table] : cost)
    for (const auto& [key, c] : table) best[key] = std::min(best[key], c);

  std::map<std::string, std::vector<double>> ratios;
  std::set<double> breakpoints;
  for (const auto& [method, table] : cost) {
    auto& rs = ratios[method];
    for (const auto& [key, c] : table) {
      const double r = std::isfinite(c) ? c / best[key] : kInf;
      rs.push_back(r);
      if (std::isfinite(r)) breakpoints.insert(r);
    }
    std::sort(rs.begin(), rs.end());
  }

  const double nprob = static_cast<double>(reference.size());
  std::vector<ProfileCurve> curves;
  for (const auto& [method, rs] : ratios) {
    ProfileCurve curve;
    curve.method = method;
    std::size_t idx = 0;
    for (double rho : breakpoints) {
      while (idx < rs.size() && rs[idx] <= rho) ++idx;
      curve.rho.push_back(rho);
      curve.fraction.push_back(static_cast<double>(idx) / nprob);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

void write_profile(std::ostream& os, const std::vector<ProfileCurve>& curves) {
  os << "method,rho,fraction\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.rho.size(); ++i)
      os << c.method << ',' << format_sci(c.rho[i]) << ',' << format_sci(c.fraction[i]) << '\n';
}

}  // namespace qterm
