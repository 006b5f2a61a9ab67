#include "qterm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "qterm/objective.hpp"
#include "qterm/quadprob.hpp"
#include "qterm/quadsolver.hpp"
#include "qterm/result.hpp"
#include "qterm/uncsolver.hpp"

namespace qterm {

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Verify3d: return "verify3d";
    case ExperimentKind::QuadBench: return "quadbench";
    case ExperimentKind::UncBench: return "uncbench";
  }
  return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "verify3d") return ExperimentKind::Verify3d;
  if (name == "quadbench") return ExperimentKind::QuadBench;
  if (name == "uncbench") return ExperimentKind::UncBench;
  throw Error(ErrorCode::InvalidSpec, "unknown experiment: " + name);
}

std::vector<std::string> known_methods(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Verify3d: return {"DAY3D", "BB1-3D", "BB2-3D", "BB1"};
    case ExperimentKind::QuadBench: return {"bb", "new", "bbq"};
    case ExperimentKind::UncBench: return {"alg1", "bbq", "gbb"};
  }
  return {};
}

namespace {

std::vector<std::string> default_methods(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Verify3d: return known_methods(kind);
    case ExperimentKind::QuadBench: return {"bb", "new"};
    case ExperimentKind::UncBench: return {"alg1", "gbb"};
  }
  return {};
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::InvalidSpec, "invalid value for " + key + ": '" + value + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) bad_value(key, v);
  return d;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); }))
    bad_value(key, v);
  try {
    return std::stoull(v);
  } catch (const std::out_of_range&) {
    bad_value(key, v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

std::string canonical_method(ExperimentKind kind, const std::string& name) {
  for (const auto& m : known_methods(kind)) {
    if (m.size() != name.size()) continue;
    bool eq = true;
    for (std::size_t i = 0; i < m.size() && eq; ++i)
      eq = std::tolower(static_cast<unsigned char>(m[i])) ==
           std::tolower(static_cast<unsigned char>(name[i]));
    if (eq) return m;
  }
  return {};
}

// Rows are sets 1..5; columns are the adaptive method and the BBQ method.
constexpr TauParams kTable3New[5] = {{0.9, 1.0}, {0.9, 1.0}, {0.5, 1.0}, {0.5, 1.0}, {0.6, 1.3}};
constexpr TauParams kTable3Bbq[5] = {{0.2, 1.0}, {0.8, 1.0}, {0.6, 1.3}, {0.4, 1.0}, {0.3, 1.3}};

}  // namespace

std::optional<TauParams> find_preset(const std::string& name) {
  if (name.empty() || name == "default" || name == "alg1") return TauParams{};
  int set = 0;
  char column[8] = {};
  int consumed = 0;
  if (std::sscanf(name.c_str(), "table3-set%d-%7[a-z]%n", &set, column, &consumed) == 2 &&
      static_cast<std::size_t>(consumed) == name.size() && set >= 1 && set <= 5) {
    const std::string col = column;
    if (col == "new") return kTable3New[set - 1];
    if (col == "bbq") return kTable3Bbq[set - 1];
  }
  return std::nullopt;
}

TauParams resolve_params(const ExperimentSpec& spec, const std::string& method, int set) {
  TauParams p;
  if (spec.preset == "table3") {
    if (set >= 1 && set <= 5) p = method == "bbq" ? kTable3Bbq[set - 1] : kTable3New[set - 1];
  } else if (auto named = find_preset(spec.preset)) {
    p = *named;
  }
  if (spec.tau1) p.tau1 = *spec.tau1;
  if (spec.gamma) p.gamma = *spec.gamma;
  return p;
}

std::vector<std::string> ExperimentSpec::effective_methods() const {
  if (!methods.empty()) return methods;
  return default_methods(experiment);
}

void ExperimentSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
  const auto ms = effective_methods();
  if (ms.empty()) fail("method list is empty");
  for (const auto& m : ms)
    if (canonical_method(experiment, m) != m)
      fail("unknown method '" + m + "' for experiment " + to_string(experiment));
  if (seeds == 0) fail("seeds must be >= 1");
  if (out.empty()) fail("output prefix is empty");
  if (preset != "table3" && !find_preset(preset)) fail("unknown preset: " + preset);
  if (tau1 && !(*tau1 > 0.0 && *tau1 <= 1.0)) fail("tau1 must lie in (0, 1]");
  if (gamma && !(*gamma >= 1.0 && std::isfinite(*gamma))) fail("gamma must be >= 1");

  if (experiment == ExperimentKind::Verify3d || experiment == ExperimentKind::QuadBench) {
    if (kappas.empty()) fail("kappa grid is empty");
    for (double k : kappas)
      if (!(k > 1.0 && std::isfinite(k))) fail("kappa must be finite and > 1");
  }
  if (experiment == ExperimentKind::QuadBench) {
    if (sets.empty() || dims.empty() || eps.empty()) fail("set, n and eps grids must be non-empty");
    for (int s : sets)
      if (s < 1 || s > 5) fail("problem set must be 1..5");
    for (std::size_t n : dims) {
      if (n < 3) fail("n must be >= 3");
      for (int s : sets) {
        if (s == 2 && n % 2 != 0) fail("set 2 needs even n");
        if ((s == 3 || s == 5) && n % 5 != 0) fail("sets 3 and 5 need n divisible by 5");
      }
    }
  }
  if (experiment == ExperimentKind::QuadBench || experiment == ExperimentKind::UncBench) {
    if (eps.empty()) fail("eps grid is empty");
    for (double e : eps)
      if (!(e > 0.0 && std::isfinite(e))) fail("eps must be finite and > 0");
  }
  if (experiment == ExperimentKind::UncBench)
    for (const auto& name : functions) builtin_by_name(name);
}

void apply_setting(ExperimentSpec& spec, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "experiment") {
    spec.experiment = experiment_from_string(value);
  } else if (key == "methods" || key == "method") {
    spec.methods.clear();
    for (const auto& m : split_list(value)) {
      const auto c = canonical_method(spec.experiment, m);
      spec.methods.push_back(c.empty() ? m : c);
    }
  } else if (key == "sets" || key == "set") {
    spec.sets.clear();
    for (const auto& s : split_list(value)) spec.sets.push_back(static_cast<int>(parse_uint(key, s)));
  } else if (key == "n") {
    spec.dims.clear();
    for (const auto& s : split_list(value)) spec.dims.push_back(parse_uint(key, s));
  } else if (key == "kappa") {
    spec.kappas.clear();
    for (const auto& s : split_list(value)) spec.kappas.push_back(parse_double(key, s));
  } else if (key == "eps") {
    spec.eps.clear();
    for (const auto& s : split_list(value)) spec.eps.push_back(parse_double(key, s));
  } else if (key == "seeds") {
    spec.seeds = parse_uint(key, value);
  } else if (key == "seed") {
    spec.base_seed = parse_uint(key, value);
  } else if (key == "functions") {
    spec.functions = split_list(value);
  } else if (key == "tau1") {
    if (value.empty()) spec.tau1.reset(); else spec.tau1 = parse_double(key, value);
  } else if (key == "gamma") {
    if (value.empty()) spec.gamma.reset(); else spec.gamma = parse_double(key, value);
  } else if (key == "preset") {
    spec.preset = value;
  } else if (key == "out") {
    spec.out = value;
  } else if (key == "trace") {
    spec.trace = parse_bool(key, value);
  } else if (key == "timing") {
    spec.timing = parse_bool(key, value);
  } else if (key == "max_iter") {
    spec.max_iter = parse_uint(key, value);
  } else if (key == "workers") {
    spec.workers = parse_uint(key, value);
  } else {
    throw Error(ErrorCode::InvalidSpec, "unknown config key: " + key);
  }
}

namespace {

std::string strip_comment(std::string line) {
  if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  return trim(line);
}

}  // namespace

void merge_config(ExperimentSpec& spec, std::istream& is) {
  std::vector<std::pair<std::string, std::string>> settings;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = strip_comment(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidSpec,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    settings.emplace_back(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  // The experiment kind decides how method names are canonicalized, so it
  // is applied before anything else.
  ExperimentSpec updated = spec;
  for (const auto& [key, value] : settings)
    if (key == "experiment") apply_setting(updated, key, value);
  for (const auto& [key, value] : settings)
    if (key != "experiment") apply_setting(updated, key, value);
  spec = std::move(updated);
}

ExperimentSpec parse_config(std::istream& is) {
  ExperimentSpec spec;
  merge_config(spec, is);
  return spec;
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file: " + path);
  return parse_config(in);
}

std::string print_config(const ExperimentSpec& spec) {
  std::ostringstream os;
  const TauParams eff = resolve_params(spec, "new", spec.sets.empty() ? 0 : spec.sets.front());
  os << "experiment = " << to_string(spec.experiment) << '\n'
     << "methods = " << join(spec.effective_methods(), [](const std::string& s) { return s; }) << '\n'
     << "sets = " << join(spec.sets, [](int s) { return std::to_string(s); }) << '\n'
     << "n = " << join(spec.dims, [](std::size_t n) { return std::to_string(n); }) << '\n'
     << "kappa = " << join(spec.kappas, fmt) << '\n'
     << "eps = " << join(spec.eps, fmt) << '\n'
     << "seeds = " << spec.seeds << '\n'
     << "seed = " << spec.base_seed << '\n';
  if (!spec.functions.empty())
    os << "functions = " << join(spec.functions, [](const std::string& s) { return s; }) << '\n';
  if (!spec.preset.empty()) os << "preset = " << spec.preset << '\n';
  if (spec.tau1) os << "tau1 = " << fmt(*spec.tau1) << '\n';
  if (spec.gamma) os << "gamma = " << fmt(*spec.gamma) << '\n';
  os << "out = " << spec.out << '\n'
     << "trace = " << (spec.trace ? "true" : "false") << '\n'
     << "timing = " << (spec.timing ? "true" : "false") << '\n'
     << "max_iter = " << spec.max_iter << '\n'
     << "workers = " << spec.workers << '\n'
     << "# effective (tau1, gamma) for the first set: (" << fmt(eff.tau1) << ", " << fmt(eff.gamma)
     << ")\n";
  return os.str();
}

namespace {

struct Cell {
  std::string method;
  std::string problem;
  int set = 0;
  std::size_t n = 0;
  double kappa = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::function<RunReport()> run;
};

std::string quad_problem_name(int set, std::size_t n, double kappa, double eps) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "set%d-n%zu-k%g-e%g", set, n, kappa, eps);
  return buf;
}

std::size_t worker_count(const ExperimentSpec& spec, std::size_t cells) {
  std::size_t w = spec.workers;
  if (w == 0) {
    if (const char* env = std::getenv("QTERM_WORKERS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) w = static_cast<std::size_t>(v);
    }
  }
  if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, cells));
}

std::vector<Cell> build_cells(const ExperimentSpec& spec) {
  std::vector<Cell> cells;
  const auto methods = spec.effective_methods();
  const std::size_t max_iter = spec.max_iter;
  const bool trace = spec.trace;

  switch (spec.experiment) {
    case ExperimentKind::Verify3d:
      for (double kappa : spec.kappas)
        for (const auto& m : methods) {
          Verify3dMethod vm = Verify3dMethod::PlainBb1;
          for (auto cand : {Verify3dMethod::Day3d, Verify3dMethod::Bb1_3d, Verify3dMethod::Bb2_3d,
                            Verify3dMethod::PlainBb1})
            if (m == to_string(cand)) vm = cand;
          char name[48];
          std::snprintf(name, sizeof name, "verify3d-k%g", kappa);
          for (std::size_t r = 0; r < spec.seeds; ++r) {
            const std::uint64_t seed = spec.base_seed + r;
            cells.push_back({m, name, 0, 3, kappa, 0.0, seed,
                             [=] { return verify_3d_termination(kappa, vm, seed, trace); }});
          }
        }
      break;

    case ExperimentKind::QuadBench:
      for (int set : spec.sets)
        for (std::size_t n : spec.dims)
          for (double kappa : spec.kappas) {
            auto problem = std::make_shared<const QuadraticProblem>(generate(set, n, kappa, spec.base_seed));
            for (double eps : spec.eps)
              for (const auto& m : methods) {
                const TauParams tp = resolve_params(spec, m, set);
                QuadSolverConfig cfg;
                cfg.tau1 = tp.tau1;
                cfg.gamma = tp.gamma;
                cfg.eps = eps;
                cfg.trace = trace;
                if (max_iter) cfg.max_iter = max_iter;
                for (std::size_t r = 0; r < spec.seeds; ++r) {
                  const std::uint64_t seed = spec.base_seed + r;
                  cells.push_back({m, quad_problem_name(set, n, kappa, eps), set, n, kappa, eps, seed,
                                   [=] {
                                     const Vector x0 = random_start(n, seed, 0);
                                     if (m == "bb") return solve_bb(*problem, x0, cfg);
                                     if (m == "bbq") return solve_bbq(*problem, x0, cfg);
                                     return solve_new(*problem, x0, cfg);
                                   }});
                }
              }
          }
      break;

    case ExperimentKind::UncBench: {
      std::vector<ObjectiveFn> fns;
      if (spec.functions.empty()) {
        fns = builtin_suite();
      } else {
        for (const auto& name : spec.functions) fns.push_back(builtin_by_name(name));
      }
      for (auto& fn_value : fns) {
        auto fn = std::make_shared<const ObjectiveFn>(std::move(fn_value));
        for (double eps : spec.eps)
          for (const auto& m : methods) {
            const TauParams tp = resolve_params(spec, m, 0);
            UncSolverConfig cfg;
            cfg.tau1 = tp.tau1;
            cfg.gamma = tp.gamma;
            cfg.eps_inf = eps;
            cfg.trace = trace;
            cfg.method = m == "bbq" ? UncMethod::Bbq : m == "gbb" ? UncMethod::Bb1 : UncMethod::Alg1;
            if (max_iter) cfg.max_iter = max_iter;
            // Builtins have one standard start, so there is one replicate.
            cells.push_back({m, fn->name, 0, fn->dimension, 0.0, eps, spec.base_seed,
                             [=] { return solve(*fn, fn->start, cfg); }});
          }
      }
      break;
    }
  }
  return cells;
}

}  // namespace

ExperimentResult execute(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<Cell> cells = build_cells(spec);
  std::vector<RunReport> reports(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      try {
        reports[i] = cells[i].run();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t nworkers = worker_count(spec, cells.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < nworkers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Cells were enumerated in a fixed order and results are stored by cell
  // index, so row order does not depend on scheduling.
  ExperimentResult res;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const RunReport& rep = reports[i];
    RunRow row;
    row.experiment = to_string(spec.experiment);
    row.method = c.method;
    row.problem = c.problem;
    row.set = c.set;
    row.n = c.n;
    row.kappa = c.kappa;
    row.eps = c.eps;
    row.seed = c.seed;
    row.iters = rep.iterations;
    row.nfe = rep.nfe;
    row.ngrad = rep.ngrad;
    row.final_gnorm = rep.final_gnorm;
    row.final_f = rep.final_f;
    row.status = to_string(rep.status);
    row.time_ms = spec.timing ? rep.wall_time * 1e3 : 0.0;
    res.runs.push_back(std::move(row));
    for (const auto& t : rep.trace)
      res.trace.push_back({c.method, c.problem, c.seed, t.k, t.step, t.taken, to_string(t.branch),
                           t.gnorm, t.f, t.tau});
  }
  res.aggregates = aggregate(res.runs);
  return res;
}

void write_trace(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "method,problem,seed,k,step,taken,branch,gnorm,f,tau\n";
  for (const auto& t : rows)
    os << t.method << ',' << t.problem << ',' << t.seed << ',' << t.k << ',' << format_sci(t.step)
       << ',' << format_sci(t.taken) << ',' << t.branch << ',' << format_sci(t.gnorm) << ','
       << format_sci(t.f) << ',' << format_sci(t.tau) << '\n';
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open output file: " + path);
  return out;
}

void close_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

}  // namespace

ExperimentFiles run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentFiles files;
  files.runs = spec.out + "_runs.csv";
  files.aggregates = spec.out + "_agg.csv";
  if (spec.trace) files.trace = spec.out + "_trace.csv";
  // Open everything first so an unwritable destination fails before any
  // solver work is done.
  std::ofstream runs = open_output(files.runs);
  std::ofstream agg = open_output(files.aggregates);
  std::ofstream trace;
  if (spec.trace) trace = open_output(files.trace);

  const ExperimentResult res = execute(spec);
  write_runs(runs, res.runs);
  close_output(runs, files.runs);
  write_aggregates(agg, res.aggregates);
  close_output(agg, files.aggregates);
  if (spec.trace) {
    write_trace(trace, res.trace);
    close_output(trace, files.trace);
  }
  return files;
}

}  // namespace qterm
