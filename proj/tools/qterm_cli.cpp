// qterm command-line harness. Talks to the library only through qterm.h.
//
// Exit codes: 0 success, 2 invalid arguments or experiment spec,
// 3 failure while running (I/O, malformed input tables).

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "qterm/qterm.h"

namespace {

constexpr int kExitSpec = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(qterm_status st) {
  switch (st) {
    case QTERM_OK: return 0;
    case QTERM_ERR_INVALID_SPEC: return kExitSpec;
    default: return kExitRuntime;
  }
}

int report_failure(qterm_status st, const std::string& what) {
  std::cerr << "qterm: " << what << ": " << qterm_last_error() << " [" << qterm_status_string(st)
            << "]\n";
  return exit_code_for(st);
}

struct ExperimentFlags {
  std::string config;
  std::string sets, dims, kappas, eps, methods, functions, preset, out;
  std::string tau1, gamma, seeds, seed, max_iter;
  bool trace = false;
  bool no_timing = false;
  bool print_config = false;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool problem_grid) {
  cmd->add_option("--config", f.config, "key=value config file (flags override it)");
  if (problem_grid) {
    cmd->add_option("--set", f.sets, "problem sets, comma separated (1..5)");
    cmd->add_option("--n", f.dims, "dimensions, comma separated");
  }
  cmd->add_option("--kappa", f.kappas, "condition numbers, comma separated");
  cmd->add_option("--eps", f.eps, "tolerances, comma separated");
  cmd->add_option("--methods", f.methods, "methods, comma separated");
  cmd->add_option("--seeds", f.seeds, "replicates per cell");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--tau1", f.tau1, "initial threshold tau_1");
  cmd->add_option("--gamma", f.gamma, "threshold update factor");
  cmd->add_option("--preset", f.preset, "named (tau1, gamma) preset, e.g. table3-set4-new");
  cmd->add_option("--out", f.out, "output prefix for <out>_runs.csv and <out>_agg.csv");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap per run");
  cmd->add_flag("--trace", f.trace, "also write <out>_trace.csv with per-iteration data");
  cmd->add_flag("--no-timing", f.no_timing, "write time_ms as 0 so outputs are byte-identical");
  cmd->add_flag("--print-config", f.print_config, "print the resolved settings and exit");
}

using ExperimentPtr = std::unique_ptr<qterm_experiment, decltype(&qterm_experiment_free)>;

int run_experiment(const char* kind, const ExperimentFlags& f) {
  qterm_experiment* raw = nullptr;
  if (auto st = qterm_experiment_new(&raw); st != QTERM_OK) return report_failure(st, "init");
  ExperimentPtr exp(raw, qterm_experiment_free);

  if (auto st = qterm_experiment_set(exp.get(), "experiment", kind); st != QTERM_OK)
    return report_failure(st, "experiment");
  if (!f.config.empty()) {
    if (auto st = qterm_experiment_load_file(exp.get(), f.config.c_str()); st != QTERM_OK)
      return report_failure(st == QTERM_ERR_IO ? QTERM_ERR_INVALID_SPEC : st, "config " + f.config);
    // The verb decides the experiment even if the file names another one.
    qterm_experiment_set(exp.get(), "experiment", kind);
  }

  const std::vector<std::pair<const char*, const std::string*>> overrides = {
      {"sets", &f.sets},   {"n", &f.dims},         {"kappa", &f.kappas},   {"eps", &f.eps},
      {"methods", &f.methods}, {"functions", &f.functions}, {"seeds", &f.seeds}, {"seed", &f.seed},
      {"tau1", &f.tau1},   {"gamma", &f.gamma},    {"preset", &f.preset},  {"out", &f.out},
      {"max_iter", &f.max_iter}};
  for (const auto& [key, value] : overrides) {
    if (value->empty()) continue;
    if (auto st = qterm_experiment_set(exp.get(), key, value->c_str()); st != QTERM_OK)
      return report_failure(st, std::string("--") + key);
  }
  if (f.trace) qterm_experiment_set(exp.get(), "trace", "true");
  if (f.no_timing) qterm_experiment_set(exp.get(), "timing", "false");

  if (auto st = qterm_experiment_validate(exp.get()); st != QTERM_OK)
    return report_failure(st, "invalid experiment");
  if (f.print_config) {
    std::cout << qterm_experiment_print(exp.get());
    return 0;
  }
  if (auto st = qterm_experiment_run(exp.get()); st != QTERM_OK)
    return report_failure(st, "run failed");

  std::cout << "runs:       " << qterm_experiment_output(exp.get(), 0) << '\n'
            << "aggregates: " << qterm_experiment_output(exp.get(), 1) << '\n';
  if (f.trace) std::cout << "trace:      " << qterm_experiment_output(exp.get(), 2) << '\n';
  std::ifstream agg(qterm_experiment_output(exp.get(), 1));
  std::cout << agg.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qterm: gradient methods with three-dimensional quadratic termination"};
  app.set_version_flag("--version", std::string(qterm_version()));
  app.require_subcommand(1);

  ExperimentFlags verify_flags, quad_flags, unc_flags;
  auto* verify = app.add_subcommand("verify3d", "eight-step termination check on 3-D quadratics");
  add_experiment_flags(verify, verify_flags, false);
  auto* quad = app.add_subcommand("quadbench", "gradient methods on random diagonal quadratics");
  add_experiment_flags(quad, quad_flags, true);
  auto* unc = app.add_subcommand("uncbench", "line-search methods on the builtin test functions");
  add_experiment_flags(unc, unc_flags, false);
  unc->add_option("--functions", unc_flags.functions, "builtin function names, comma separated");

  std::string profile_in, profile_out = "profile.csv", metric = "iter";
  auto* profile = app.add_subcommand("profile", "performance profile from a runs CSV");
  profile->add_option("--in", profile_in, "runs CSV written by a bench verb")->required();
  profile->add_option("--out", profile_out, "output CSV (method,rho,fraction)");
  profile->add_option("--metric", metric, "iter or time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitSpec;
  }

  if (verify->parsed()) return run_experiment("verify3d", verify_flags);
  if (quad->parsed()) return run_experiment("quadbench", quad_flags);
  if (unc->parsed()) return run_experiment("uncbench", unc_flags);
  if (profile->parsed()) {
    if (metric != "iter" && metric != "time") {
      std::cerr << "qterm: --metric must be iter or time\n";
      return kExitSpec;
    }
    const auto st = qterm_profile(profile_in.c_str(), metric.c_str(), profile_out.c_str());
    if (st != QTERM_OK) return report_failure(st, "profile");
    std::cout << "profile: " << profile_out << '\n';
    return 0;
  }
  return kExitSpec;
}
