#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "qterm/csv.hpp"
#include "qterm/experiment.hpp"
#include "qterm/profile.hpp"
#include "qterm/result.hpp"

using namespace qterm;

namespace {

RunRow row(const std::string& method, const std::string& problem, std::size_t iters,
           const std::string& status = "ok") {
  RunRow r;
  r.experiment = "quadbench";
  r.method = method;
  r.problem = problem;
  r.seed = 1;
  r.iters = iters;
  r.status = status;
  return r;
}

double fraction_at(const ProfileCurve& c, double rho) {
  double f = 0.0;
  for (std::size_t i = 0; i < c.rho.size(); ++i)
    if (c.rho[i] <= rho) f = c.fraction[i];
  return f;
}

const ProfileCurve& curve(const std::vector<ProfileCurve>& cs, const std::string& m) {
  for (const auto& c : cs)
    if (c.method == m) return c;
  throw std::runtime_error("missing curve " + m);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qterm_test_bench";
  std::filesystem::create_directories(dir);
  return dir / name;
}

ExperimentSpec small_quad() {
  ExperimentSpec s;
  s.experiment = ExperimentKind::QuadBench;
  s.sets = {4};
  s.dims = {100};
  s.kappas = {1e3};
  s.eps = {1e-6};
  s.seeds = 3;
  s.timing = false;
  return s;
}

}  // namespace

TEST_CASE("presets") {
  auto p = find_preset("table3-set4-new");
  REQUIRE(p);
  CHECK(p->tau1 == 0.5);
  CHECK(p->gamma == 1.0);
  p = find_preset("table3-set5-new");
  REQUIRE(p);
  CHECK(p->tau1 == 0.6);
  CHECK(p->gamma == 1.3);
  p = find_preset("table3-set1-new");
  REQUIRE(p);
  CHECK(p->tau1 == 0.9);
  p = find_preset("table3-set2-bbq");
  REQUIRE(p);
  CHECK(p->tau1 == 0.8);
  CHECK_FALSE(find_preset("table3-set9-new"));
  CHECK_FALSE(find_preset("bogus"));

  ExperimentSpec s;
  auto t = resolve_params(s, "new", 4);
  CHECK(t.tau1 == 0.65);
  CHECK(t.gamma == 1.4);
  s.preset = "table3";
  t = resolve_params(s, "bbq", 3);
  CHECK(t.tau1 == 0.6);
  CHECK(t.gamma == 1.3);
  s.tau1 = 0.7;
  t = resolve_params(s, "bbq", 3);
  CHECK(t.tau1 == 0.7);
  CHECK(t.gamma == 1.3);
}

TEST_CASE("config parse, override and print round trip") {
  std::istringstream in(
      "# comment\n"
      "methods = bb,new\n"
      "sets = 1,4\n"
      "n = 50\n"
      "kappa = 100, 1e4\n"
      "seeds = 2\n"
      "experiment = quadbench\n"
      "preset = table3-set1-new\n"
      "n = 60\n");
  const auto s = parse_config(in);
  CHECK(s.experiment == ExperimentKind::QuadBench);
  CHECK(s.sets == std::vector<int>{1, 4});
  CHECK(s.dims == std::vector<std::size_t>{60});
  CHECK(s.kappas == std::vector<double>{100, 1e4});
  CHECK(s.seeds == 2);
  CHECK(resolve_params(s, "new", 1).tau1 == 0.9);

  std::istringstream again(print_config(s));
  const auto t = parse_config(again);
  CHECK(print_config(t) == print_config(s));

  ExperimentSpec u = s;
  std::istringstream extra("seeds = 5\n");
  merge_config(u, extra);
  CHECK(u.seeds == 5);
  CHECK(u.dims == s.dims);

  ExperimentSpec v;
  CHECK_THROWS_AS(apply_setting(v, "wat", "1"), Error);
  CHECK_THROWS_AS(apply_setting(v, "n", "abc"), Error);
  std::istringstream bad("seeds = 2\nfoo = 1\n");
  ExperimentSpec w;
  CHECK_THROWS_AS(merge_config(w, bad), Error);
  CHECK(w.seeds == 10);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/q.cfg"), Error);
}

TEST_CASE("experiment validation") {
  auto s = small_quad();
  CHECK_NOTHROW(s.validate());
  s.sets = {6};
  CHECK_THROWS_AS(s.validate(), Error);
  s = small_quad();
  s.methods = {"nope"};
  CHECK_THROWS_AS(s.validate(), Error);
  s = small_quad();
  s.seeds = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = small_quad();
  s.kappas = {0.5};
  CHECK_THROWS_AS(s.validate(), Error);
  s = small_quad();
  apply_setting(s, "methods", "NEW, Bb");
  CHECK(s.methods == std::vector<std::string>{"new", "bb"});
  CHECK_NOTHROW(s.validate());
  CHECK(experiment_from_string("uncbench") == ExperimentKind::UncBench);
  CHECK_THROWS_AS(experiment_from_string("x"), Error);
}

TEST_CASE("profile examples") {
  SUBCASE("single method") {
    const auto cs = performance_profile({row("A", "p1", 3), row("A", "p2", 5)},
                                        ProfileMetric::Iterations);
    REQUIRE(cs.size() == 1);
    CHECK(fraction_at(cs[0], 1.0) == 1.0);
  }
  SUBCASE("dominated method") {
    std::vector<RunRow> rows{row("A", "p1", 3), row("A", "p2", 5), row("B", "p1", 6),
                             row("B", "p2", 9)};
    const auto cs = performance_profile(rows, ProfileMetric::Iterations);
    CHECK(fraction_at(curve(cs, "A"), 1.0) == 1.0);
    CHECK(fraction_at(curve(cs, "B"), 1.0) == 0.0);
  }
  SUBCASE("three problems, A {1,2,4} vs B {2,2,2}") {
    std::vector<RunRow> rows{row("A", "p1", 1), row("A", "p2", 2), row("A", "p3", 4),
                             row("B", "p1", 2), row("B", "p2", 2), row("B", "p3", 2)};
    const auto cs = performance_profile(rows, ProfileMetric::Iterations);
    const auto& a = curve(cs, "A");
    const auto& b = curve(cs, "B");
    // Ratios: A = (1, 1, 2), B = (2, 1, 1).
    CHECK(fraction_at(a, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(fraction_at(b, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK(fraction_at(a, 2.0) == 1.0);
    CHECK(fraction_at(b, 2.0) == 1.0);
  }
  SUBCASE("unsolved runs never count") {
    std::vector<RunRow> rows{row("A", "p1", 1), row("A", "p2", 2, "max_iter"),
                             row("B", "p1", 2), row("B", "p2", 2)};
    const auto cs = performance_profile(rows, ProfileMetric::Iterations);
    const auto& a = curve(cs, "A");
    CHECK(a.fraction.back() == doctest::Approx(0.5));
    std::size_t solved = 0;
    for (const auto& c : cs) solved += static_cast<std::size_t>(std::lround(c.fraction.back() * 2));
    CHECK(solved == 3);
  }
  SUBCASE("fractions are nondecreasing") {
    std::vector<RunRow> rows;
    for (int p = 0; p < 20; ++p) {
      rows.push_back(row("A", "p" + std::to_string(p), 1 + (p * 7) % 13));
      rows.push_back(row("B", "p" + std::to_string(p), 1 + (p * 5) % 11));
      rows.push_back(row("C", "p" + std::to_string(p), 3, p % 4 ? "ok" : "max_iter"));
    }
    for (const auto& c : performance_profile(rows, ProfileMetric::Iterations))
      for (std::size_t i = 1; i < c.fraction.size(); ++i) {
        CHECK(c.fraction[i] >= c.fraction[i - 1]);
        CHECK(c.rho[i] > c.rho[i - 1]);
      }
  }
  SUBCASE("misaligned and empty tables") {
    std::vector<RunRow> rows{row("A", "p1", 1), row("A", "p2", 2), row("B", "p1", 2)};
    CHECK_THROWS_AS(performance_profile(rows, ProfileMetric::Iterations), Error);
    CHECK_THROWS_AS(performance_profile({}, ProfileMetric::Iterations), Error);
    CHECK_THROWS_AS(profile_metric_from_string("speed"), Error);
  }
}

TEST_CASE("run CSV round trip and aggregates recomputed from raw rows") {
  auto s = small_quad();
  s.methods = {"bb", "new"};
  const auto res = execute(s);
  REQUIRE(res.runs.size() == 6);
  std::stringstream ss;
  write_runs(ss, res.runs);
  const auto back = read_runs(ss);
  REQUIRE(back.size() == res.runs.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].method == res.runs[i].method);
    CHECK(back[i].iters == res.runs[i].iters);
    CHECK(back[i].final_gnorm == doctest::Approx(res.runs[i].final_gnorm).epsilon(1e-9));
  }

  REQUIRE(res.aggregates.size() == 2);
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& r : res.runs) {
    sums[r.method].first += static_cast<double>(r.iters);
    ++sums[r.method].second;
  }
  for (const auto& a : res.aggregates) {
    CHECK(a.runs == 3);
    CHECK(a.ok_runs == 3);
    CHECK(a.iters_mean == doctest::Approx(sums[a.method].first / sums[a.method].second));
  }
  const auto again = aggregate(back);
  REQUIRE(again.size() == 2);
  CHECK(again[0].iters_mean == res.aggregates[0].iters_mean);

  std::istringstream bad("method,iters\nbb,3\n");
  CHECK_THROWS_AS(read_runs(bad), Error);
}

TEST_CASE("repeated runs produce byte-identical files") {
  auto s = small_quad();
  s.seeds = 1;
  s.trace = true;
  s.out = scratch("det_a").string();
  const auto a = run_experiment(s);
  s.out = scratch("det_b").string();
  s.workers = 1;
  const auto b = run_experiment(s);
  CHECK(slurp(a.runs) == slurp(b.runs));
  CHECK(slurp(a.aggregates) == slurp(b.aggregates));
  CHECK(slurp(a.trace) == slurp(b.trace));
  CHECK_FALSE(slurp(a.trace).empty());
}

TEST_CASE("verify3d experiment aggregates") {
  ExperimentSpec s;
  s.experiment = ExperimentKind::Verify3d;
  s.kappas = {100};
  s.seeds = 10;
  const auto res = execute(s);
  CHECK(res.runs.size() == 40);
  REQUIRE(res.aggregates.size() == 4);
  for (const auto& a : res.aggregates) {
    if (a.method == "BB1")
      CHECK(a.final_gnorm_mean >= 1e-2);
    else
      CHECK(a.final_gnorm_mean <= 1e-8);
  }
}

TEST_CASE("uncbench subset") {
  ExperimentSpec s;
  s.experiment = ExperimentKind::UncBench;
  s.functions = {"rosenbrock", "beale"};
  const auto res = execute(s);
  CHECK(res.runs.size() == 4);
  for (const auto& r : res.runs) {
    CHECK(r.status == "ok");
    CHECK(r.nfe >= r.iters);
  }
}

TEST_CASE("unwritable output fails before running") {
  auto s = small_quad();
  s.out = "/nonexistent_dir_qterm/x";
  try {
    run_experiment(s);
    FAIL("expected an Io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}
