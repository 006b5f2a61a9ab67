#include "qterm/csv.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "qterm/result.hpp"

namespace qterm {

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

void write_runs(std::ostream& os, const std::vector<RunRow>& rows) {
  os << kRunHeader << '\n';
  for (const auto& r : rows) {
    os << r.experiment << ',' << r.method << ',' << r.problem << ',' << r.set << ',' << r.n << ','
       << format_sci(r.kappa) << ',' << format_sci(r.eps) << ',' << r.seed << ',' << r.iters << ','
       << r.nfe << ',' << r.ngrad << ',' << format_sci(r.final_gnorm) << ','
       << format_sci(r.final_f) << ',' << r.status << ',' << format_sci(r.time_ms) << '\n';
  }
}

std::vector<RunRow> read_runs(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::InvalidInput, "run table is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRunHeader) throw Error(ErrorCode::InvalidInput, "run table: unexpected header");
  std::vector<RunRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 15)
      throw Error(ErrorCode::InvalidInput, "run table: wrong field count on line " + std::to_string(lineno));
    RunRow r;
    try {
      r.experiment = f[0];
      r.method = f[1];
      r.problem = f[2];
      r.set = std::stoi(f[3]);
      r.n = std::stoul(f[4]);
      r.kappa = std::stod(f[5]);
      r.eps = std::stod(f[6]);
      r.seed = std::stoull(f[7]);
      r.iters = std::stoul(f[8]);
      r.nfe = std::stoul(f[9]);
      r.ngrad = std::stoul(f[10]);
      r.final_gnorm = std::stod(f[11]);
      r.final_f = std::stod(f[12]);
      r.status = f[13];
      r.time_ms = std::stod(f[14]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidInput, "run table: malformed number on line " + std::to_string(lineno));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::size_t> index;
  std::vector<AggregateRow> out;
  for (const auto& r : rows) {
    const Key key{r.experiment, r.problem, r.method};
    auto it = index.find(key);
    if (it == index.end()) {
      AggregateRow a;
      a.experiment = r.experiment;
      a.method = r.method;
      a.problem = r.problem;
      a.set = r.set;
      a.n = r.n;
      a.kappa = r.kappa;
      a.eps = r.eps;
      it = index.emplace(key, out.size()).first;
      out.push_back(a);
    }
    auto& a = out[it->second];
    ++a.runs;
    if (r.status == "ok") ++a.ok_runs;
    if (r.status == "ok" || r.status == "max_iter") {
      ++a.averaged_runs;
      a.iters_mean += static_cast<double>(r.iters);
      a.nfe_mean += static_cast<double>(r.nfe);
      a.ngrad_mean += static_cast<double>(r.ngrad);
      a.final_gnorm_mean += r.final_gnorm;
      a.final_f_mean += r.final_f;
      a.time_ms_mean += r.time_ms;
    }
  }
  for (auto& a : out) {
    if (a.averaged_runs == 0) continue;
    const double m = static_cast<double>(a.averaged_runs);
    a.iters_mean /= m;
    a.nfe_mean /= m;
    a.ngrad_mean /= m;
    a.final_gnorm_mean /= m;
    a.final_f_mean /= m;
    a.time_ms_mean /= m;
  }
  return out;
}

void write_aggregates(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << kAggregateHeader << '\n';
  for (const auto& a : rows) {
    os << a.experiment << ',' << a.method << ',' << a.problem << ',' << a.set << ',' << a.n << ','
       << format_sci(a.kappa) << ',' << format_sci(a.eps) << ',' << a.runs << ',' << a.ok_runs
       << ',' << a.averaged_runs << ',' << format_sci(a.iters_mean) << ','
       << format_sci(a.nfe_mean) << ',' << format_sci(a.ngrad_mean) << ','
       << format_sci(a.final_gnorm_mean) << ',' << format_sci(a.final_f_mean) << ','
       << format_sci(a.time_ms_mean) << '\n';
  }
}

}  // namespace qterm
