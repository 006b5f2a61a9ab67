#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qterm {

/// One (method, problem, replicate) run.
struct RunRow {
  std::string experiment;
  std::string method;
  std::string problem;
  int set = 0;
  std::size_t n = 0;
  double kappa = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::size_t iters = 0;
  std::size_t nfe = 0;
  std::size_t ngrad = 0;
  double final_gnorm = 0.0;
  double final_f = 0.0;
  std::string status;
  double time_ms = 0.0;
};

/// Per (method, problem) means over rows with status ok or max_iter.
struct AggregateRow {
  std::string experiment;
  std::string method;
  std::string problem;
  int set = 0;
  std::size_t n = 0;
  double kappa = 0.0;
  double eps = 0.0;
  std::size_t runs = 0;
  std::size_t ok_runs = 0;
  std::size_t averaged_runs = 0;
  double iters_mean = 0.0;
  double nfe_mean = 0.0;
  double ngrad_mean = 0.0;
  double final_gnorm_mean = 0.0;
  double final_f_mean = 0.0;
  double time_ms_mean = 0.0;
};

inline constexpr const char* kRunHeader =
    "experiment,method,problem,set,n,kappa,eps,seed,iters,nfe,ngrad,final_gnorm,final_f,status,"
    "time_ms";
inline constexpr const char* kAggregateHeader =
    "experiment,method,problem,set,n,kappa,eps,runs,ok_runs,averaged_runs,iters_mean,nfe_mean,"
    "ngrad_mean,final_gnorm_mean,final_f_mean,time_ms_mean";

/// Scientific notation, 10 significant digits.
std::string format_sci(double v);

/// Splits one CSV line on commas (fields never contain commas or quotes).
std::vector<std::string> split_csv_line(const std::string& line);

void write_runs(std::ostream& os, const std::vector<RunRow>& rows);
std::vector<RunRow> read_runs(std::istream& is);

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& rows);
void write_aggregates(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace qterm
