#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qterm/csv.hpp"

namespace qterm {

enum class ExperimentKind { Verify3d, QuadBench, UncBench };

const char* to_string(ExperimentKind kind) noexcept;
ExperimentKind experiment_from_string(const std::string& name);

/// (tau1, gamma) pair of the adaptive threshold.
struct TauParams {
  double tau1 = 0.65;
  double gamma = 1.4;
};

/// Everything needed to reproduce one experiment. Grids multiply out into
/// cells; each cell is run for `seeds` replicates.
///
/// Config file keys match the field names (one `key = value` per line, `#`
/// comments, lists comma separated): experiment, methods, sets, n, kappa,
/// eps, seeds, seed, functions, tau1, gamma, preset, out, trace, timing,
/// max_iter, workers.
struct ExperimentSpec {
  ExperimentKind experiment = ExperimentKind::QuadBench;
  std::vector<std::string> methods;  // empty: kind-specific defaults
  std::vector<int> sets{4};
  std::vector<std::size_t> dims{1000};
  std::vector<double> kappas{1e4};
  std::vector<double> eps{1e-9};
  std::size_t seeds = 10;
  std::uint64_t base_seed = 1;
  std::vector<std::string> functions;  // uncbench subset; empty: whole suite
  std::optional<double> tau1;
  std::optional<double> gamma;
  std::string preset;
  std::string out = "qterm";
  bool trace = false;
  bool timing = true;
  std::size_t max_iter = 0;  // 0: solver default
  std::size_t workers = 0;   // 0: QTERM_WORKERS or hardware concurrency

  /// Methods after defaulting.
  std::vector<std::string> effective_methods() const;

  /// Throws Error(InvalidSpec) describing the first problem found.
  void validate() const;
};

/// Known method names per experiment kind.
std::vector<std::string> known_methods(ExperimentKind kind);

/// Applies one `key = value` setting. Throws Error(InvalidSpec) for an
/// unknown key or an unparsable value.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// Reads a key=value config. Later lines win.
ExperimentSpec parse_config(std::istream& is);
ExperimentSpec parse_config_file(const std::string& path);
/// Applies key=value text on top of an existing spec.
void merge_config(ExperimentSpec& spec, std::istream& is);

/// Canonical key=value rendering; parse_config(print_config(s)) == s.
std::string print_config(const ExperimentSpec& spec);

/// Named (tau1, gamma) presets: "default", "alg1", "table3-set<k>-new",
/// "table3-set<k>-bbq". Returns nullopt for an unknown name.
std::optional<TauParams> find_preset(const std::string& name);

/// Parameters in force for `method` on problem set `set`: explicit
/// tau1/gamma beat the preset, and the preset "table3" picks the row for
/// `set` and the column for `method`.
TauParams resolve_params(const ExperimentSpec& spec, const std::string& method, int set);

struct TraceRow {
  std::string method;
  std::string problem;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  double step = 0.0;
  double taken = 0.0;
  std::string branch;
  double gnorm = 0.0;
  double f = 0.0;
  double tau = 0.0;
};

struct ExperimentResult {
  std::vector<RunRow> runs;
  std::vector<AggregateRow> aggregates;
  std::vector<TraceRow> trace;
};

/// Runs all cells (in parallel) and returns rows in deterministic order.
ExperimentResult execute(const ExperimentSpec& spec);

/// Paths of the files written by run_experiment.
struct ExperimentFiles {
  std::string runs;
  std::string aggregates;
  std::string trace;  // empty unless tracing
};

/// execute() plus `<out>_runs.csv`, `<out>_agg.csv` and, with tracing,
/// `<out>_trace.csv`. Throws Error(Io) if a file cannot be written.
ExperimentFiles run_experiment(const ExperimentSpec& spec);

void write_trace(std::ostream& os, const std::vector<TraceRow>& rows);

}  // namespace qterm
