#include "qterm/qterm.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "qterm/csv.hpp"
#include "qterm/experiment.hpp"
#include "qterm/objective.hpp"
#include "qterm/profile.hpp"
#include "qterm/quadprob.hpp"
#include "qterm/quadsolver.hpp"
#include "qterm/result.hpp"
#include "qterm/stepsizes.hpp"
#include "qterm/termination3d.hpp"
#include "qterm/uncsolver.hpp"

struct qterm_problem {
  qterm::QuadraticProblem p;
};

struct qterm_report {
  qterm::RunReport r;
};

struct qterm_experiment {
  qterm::ExperimentSpec spec;
  qterm::ExperimentFiles files;
  std::string printed;
};

namespace {

thread_local std::string g_last_error;

qterm_status to_status(qterm::ErrorCode code) {
  using qterm::ErrorCode;
  switch (code) {
    case ErrorCode::NonPositiveCurvature: return QTERM_ERR_NONPOSITIVE_CURVATURE;
    case ErrorCode::ZeroDenominator: return QTERM_ERR_ZERO_DENOMINATOR;
    case ErrorCode::Degenerate: return QTERM_ERR_DEGENERATE;
    case ErrorCode::LinearDependence: return QTERM_ERR_LINEAR_DEPENDENCE;
    case ErrorCode::NumericalFailure: return QTERM_ERR_NUMERICAL_FAILURE;
    case ErrorCode::NonDescentDirection: return QTERM_ERR_NON_DESCENT_DIRECTION;
    case ErrorCode::LineSearchFailure: return QTERM_ERR_LINE_SEARCH_FAILURE;
    case ErrorCode::InvalidSpec: return QTERM_ERR_INVALID_SPEC;
    case ErrorCode::InvalidInput: return QTERM_ERR_INVALID_INPUT;
    case ErrorCode::Io: return QTERM_ERR_IO;
  }
  return QTERM_ERR_INTERNAL;
}

qterm_status fail(qterm_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

/// Runs `body`, translating exceptions into status codes.
template <class F>
qterm_status guarded(F&& body) noexcept {
  try {
    return body();
  } catch (const qterm::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QTERM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QTERM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QTERM_ERR_INTERNAL, "unknown exception");
  }
}

qterm_status from_result(const qterm::Result<double>& r, double* out) {
  if (!out) return fail(QTERM_ERR_INVALID_INPUT, "null output pointer");
  if (!r) return fail(to_status(r.error()), qterm::to_string(r.error()));
  *out = *r;
  return QTERM_OK;
}

std::span<const double> cspan(const double* p, std::size_t n) { return {p, n}; }

bool bad_array(const void* p, std::size_t n) { return n > 0 && p == nullptr; }

qterm::StepPair pair_of(const double* s, const double* y, std::size_t n) {
  return qterm::StepPair::from_vectors(cspan(s, n), cspan(y, n));
}

}  // namespace

extern "C" {

const char* qterm_version(void) { return "0.1.0"; }

const char* qterm_status_string(qterm_status status) {
  switch (status) {
    case QTERM_OK: return "ok";
    case QTERM_ERR_NONPOSITIVE_CURVATURE: return "nonpositive_curvature";
    case QTERM_ERR_ZERO_DENOMINATOR: return "zero_denominator";
    case QTERM_ERR_DEGENERATE: return "degenerate";
    case QTERM_ERR_LINEAR_DEPENDENCE: return "linear_dependence";
    case QTERM_ERR_NUMERICAL_FAILURE: return "numerical_failure";
    case QTERM_ERR_NON_DESCENT_DIRECTION: return "non_descent_direction";
    case QTERM_ERR_LINE_SEARCH_FAILURE: return "line_search_failure";
    case QTERM_ERR_INVALID_SPEC: return "invalid_spec";
    case QTERM_ERR_INVALID_INPUT: return "invalid_input";
    case QTERM_ERR_IO: return "io";
    case QTERM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* qterm_last_error(void) { return g_last_error.c_str(); }

// ---- stepsizes ------------------------------------------------------------

qterm_status qterm_bb1(const double* s, const double* y, size_t n, double* out) {
  return guarded([&] {
    if (bad_array(s, n) || bad_array(y, n)) return fail(QTERM_ERR_INVALID_INPUT, "null array");
    return from_result(qterm::bb1(pair_of(s, y, n)), out);
  });
}

qterm_status qterm_bb2(const double* s, const double* y, size_t n, double* out) {
  return guarded([&] {
    if (bad_array(s, n) || bad_array(y, n)) return fail(QTERM_ERR_INVALID_INPUT, "null array");
    return from_result(qterm::bb2(pair_of(s, y, n)), out);
  });
}

qterm_status qterm_sd(const double* g, const double* ag, size_t n, double* out) {
  return guarded([&] {
    if (bad_array(g, n) || bad_array(ag, n)) return fail(QTERM_ERR_INVALID_INPUT, "null array");
    return from_result(qterm::sd_stepsize(cspan(g, n), cspan(ag, n)), out);
  });
}

qterm_status qterm_day(const double* s, const double* y, size_t n, double* out) {
  return guarded([&] {
    if (bad_array(s, n) || bad_array(y, n)) return fail(QTERM_ERR_INVALID_INPUT, "null array");
    return from_result(qterm::day_stepsize(pair_of(s, y, n)), out);
  });
}

qterm_status qterm_bbq(double bb1_prev, double bb2_prev, double bb1_cur, double bb2_cur,
                       double* out) {
  return guarded([&] {
    return from_result(qterm::bbq_stepsize(bb1_prev, bb1_cur, bb2_prev, bb2_cur), out);
  });
}

qterm_status qterm_largest_root(const double* h, int dim, double* out) {
  return guarded([&] {
    if (dim != 3 && dim != 4) return fail(QTERM_ERR_INVALID_INPUT, "dimension must be 3 or 4");
    if (!h) return fail(QTERM_ERR_INVALID_INPUT, "null matrix");
    const auto m = qterm::HMatrix::from_entries(dim, cspan(h, static_cast<std::size_t>(dim * dim)));
    if (dim == 4) return from_result(qterm::largest_root_quartic(m), out);
    const auto c = qterm::largest_root_cubic(m);
    if (!c) return fail(to_status(c.error()), qterm::to_string(c.error()));
    if (!out) return fail(QTERM_ERR_INVALID_INPUT, "null output pointer");
    *out = c->largest_root;
    return QTERM_OK;
  });
}

// ---- problems --------------------------------------------------------------

qterm_status qterm_problem_generate(int set, size_t n, double kappa, uint64_t seed,
                                    qterm_problem** out) {
  return guarded([&] {
    if (!out) return fail(QTERM_ERR_INVALID_INPUT, "null output pointer");
    *out = new qterm_problem{qterm::generate(set, n, kappa, seed)};
    return QTERM_OK;
  });
}

qterm_status qterm_problem_verification(double kappa, qterm_problem** out) {
  return guarded([&] {
    if (!out) return fail(QTERM_ERR_INVALID_INPUT, "null output pointer");
    *out = new qterm_problem{qterm::verification_problem(kappa)};
    return QTERM_OK;
  });
}

qterm_status qterm_problem_read(const char* path, qterm_problem** out) {
  return guarded([&] {
    if (!path || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    std::ifstream in(path);
    if (!in) return fail(QTERM_ERR_IO, std::string("cannot open ") + path);
    *out = new qterm_problem{qterm::read_problem(in)};
    return QTERM_OK;
  });
}

qterm_status qterm_problem_write(const qterm_problem* p, const char* path) {
  return guarded([&] {
    if (!p || !path) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) return fail(QTERM_ERR_IO, std::string("cannot open ") + path);
    qterm::write_problem(os, p->p);
    os.flush();
    if (!os) return fail(QTERM_ERR_IO, std::string("write failed: ") + path);
    return QTERM_OK;
  });
}

void qterm_problem_free(qterm_problem* p) { delete p; }

size_t qterm_problem_dim(const qterm_problem* p) { return p ? p->p.dimension() : 0; }

double qterm_problem_kappa(const qterm_problem* p) { return p ? p->p.kappa : 0.0; }

qterm_status qterm_problem_spectrum(const qterm_problem* p, double* out, size_t len) {
  return guarded([&] {
    if (!p || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    if (len != p->p.dimension()) return fail(QTERM_ERR_INVALID_INPUT, "length mismatch");
    std::copy(p->p.spectrum.begin(), p->p.spectrum.end(), out);
    return QTERM_OK;
  });
}

qterm_status qterm_problem_value(const qterm_problem* p, const double* x, size_t n, double* f) {
  return guarded([&] {
    if (!p || !x || !f) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    if (n != p->p.dimension()) return fail(QTERM_ERR_INVALID_INPUT, "length mismatch");
    *f = p->p.value(cspan(x, n));
    return QTERM_OK;
  });
}

qterm_status qterm_problem_gradient(const qterm_problem* p, const double* x, size_t n, double* g) {
  return guarded([&] {
    if (!p || !x || !g) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    if (n != p->p.dimension()) return fail(QTERM_ERR_INVALID_INPUT, "length mismatch");
    p->p.gradient(cspan(x, n), std::span<double>(g, n));
    return QTERM_OK;
  });
}

qterm_status qterm_random_start(size_t n, uint64_t seed, uint64_t replicate, double* out) {
  return guarded([&] {
    if (bad_array(out, n)) return fail(QTERM_ERR_INVALID_INPUT, "null output");
    const auto x = qterm::random_start(n, seed, replicate);
    std::copy(x.begin(), x.end(), out);
    return QTERM_OK;
  });
}

// ---- reports ---------------------------------------------------------------

void qterm_report_free(qterm_report* r) { delete r; }

const char* qterm_report_status(const qterm_report* r) {
  return r ? qterm::to_string(r->r.status) : "";
}

int qterm_report_ok(const qterm_report* r) {
  return r && r->r.status == qterm::RunStatus::Ok ? 1 : 0;
}

size_t qterm_report_iterations(const qterm_report* r) { return r ? r->r.iterations : 0; }
size_t qterm_report_nfe(const qterm_report* r) { return r ? r->r.nfe : 0; }
size_t qterm_report_ngrad(const qterm_report* r) { return r ? r->r.ngrad : 0; }
double qterm_report_final_gnorm(const qterm_report* r) { return r ? r->r.final_gnorm : 0.0; }
double qterm_report_final_f(const qterm_report* r) { return r ? r->r.final_f : 0.0; }
double qterm_report_wall_time(const qterm_report* r) { return r ? r->r.wall_time : 0.0; }
const char* qterm_report_message(const qterm_report* r) { return r ? r->r.message.c_str() : ""; }
size_t qterm_report_dim(const qterm_report* r) { return r ? r->r.x.size() : 0; }

qterm_status qterm_report_x(const qterm_report* r, double* out, size_t len) {
  return guarded([&] {
    if (!r || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    if (len != r->r.x.size()) return fail(QTERM_ERR_INVALID_INPUT, "length mismatch");
    std::copy(r->r.x.begin(), r->r.x.end(), out);
    return QTERM_OK;
  });
}

size_t qterm_report_branch_count(const qterm_report* r, const char* branch) {
  if (!r || !branch) return 0;
  const auto it = r->r.branch_counts.find(branch);
  return it == r->r.branch_counts.end() ? 0 : it->second;
}

size_t qterm_report_trace_length(const qterm_report* r) { return r ? r->r.trace.size() : 0; }

qterm_status qterm_report_trace_entry(const qterm_report* r, size_t i, qterm_trace_entry* out) {
  if (!r || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
  if (i >= r->r.trace.size()) return fail(QTERM_ERR_INVALID_INPUT, "trace index out of range");
  const auto& t = r->r.trace[i];
  *out = {t.k, t.step, t.taken, qterm::to_string(t.branch), t.gnorm, t.f, t.tau};
  return QTERM_OK;
}

// ---- quadratic solvers -----------------------------------------------------

void qterm_quad_options_default(qterm_quad_options* opt) {
  if (!opt) return;
  const qterm::QuadSolverConfig d;
  *opt = {d.tau1, d.gamma, d.eps, d.max_iter, d.trace ? 1 : 0};
}

qterm_status qterm_quad_solve(const qterm_problem* p, qterm_quad_method method, const double* x0,
                              size_t n, const qterm_quad_options* opt, qterm_report** out) {
  return guarded([&] {
    if (!p || !x0 || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    if (n != p->p.dimension()) return fail(QTERM_ERR_INVALID_INPUT, "length mismatch");
    qterm::QuadSolverConfig cfg;
    if (opt) {
      cfg.tau1 = opt->tau1;
      cfg.gamma = opt->gamma;
      cfg.eps = opt->eps;
      cfg.max_iter = opt->max_iter;
      cfg.trace = opt->trace != 0;
    }
    auto rep = std::make_unique<qterm_report>();
    switch (method) {
      case QTERM_QUAD_BB: rep->r = qterm::solve_bb(p->p, cspan(x0, n), cfg); break;
      case QTERM_QUAD_NEW: rep->r = qterm::solve_new(p->p, cspan(x0, n), cfg); break;
      case QTERM_QUAD_BBQ: rep->r = qterm::solve_bbq(p->p, cspan(x0, n), cfg); break;
      default: return fail(QTERM_ERR_INVALID_SPEC, "unknown quadratic method");
    }
    *out = rep.release();
    return QTERM_OK;
  });
}

qterm_status qterm_verify3d(double kappa, qterm_verify3d_method method, uint64_t seed, int trace,
                            qterm_report** out) {
  return guarded([&] {
    if (!out) return fail(QTERM_ERR_INVALID_INPUT, "null output pointer");
    qterm::Verify3dMethod m;
    switch (method) {
      case QTERM_VERIFY_DAY3D: m = qterm::Verify3dMethod::Day3d; break;
      case QTERM_VERIFY_BB1_3D: m = qterm::Verify3dMethod::Bb1_3d; break;
      case QTERM_VERIFY_BB2_3D: m = qterm::Verify3dMethod::Bb2_3d; break;
      case QTERM_VERIFY_PLAIN_BB1: m = qterm::Verify3dMethod::PlainBb1; break;
      default: return fail(QTERM_ERR_INVALID_SPEC, "unknown verification method");
    }
    auto rep = std::make_unique<qterm_report>();
    rep->r = qterm::verify_3d_termination(kappa, m, seed, trace != 0);
    *out = rep.release();
    return QTERM_OK;
  });
}

// ---- general solver --------------------------------------------------------

void qterm_unc_options_default(qterm_unc_options* opt) {
  if (!opt) return;
  const qterm::UncSolverConfig d;
  *opt = {d.alpha_min, d.alpha_max, d.T,         d.delta,
          d.eta,       d.tau1,      d.gamma,     d.eps_inf,
          d.max_iter,  d.max_backtracks, d.max_fevals, QTERM_UNC_ALG1,
          0.0,         0};
}

namespace {

qterm::UncSolverConfig unc_config(const qterm_unc_options* opt) {
  qterm::UncSolverConfig cfg;
  if (!opt) return cfg;
  cfg.alpha_min = opt->alpha_min;
  cfg.alpha_max = opt->alpha_max;
  cfg.T = opt->T;
  cfg.delta = opt->delta;
  cfg.eta = opt->eta;
  cfg.tau1 = opt->tau1;
  cfg.gamma = opt->gamma;
  cfg.eps_inf = opt->eps_inf;
  cfg.max_iter = opt->max_iter;
  cfg.max_backtracks = opt->max_backtracks;
  cfg.max_fevals = opt->max_fevals;
  switch (opt->method) {
    case QTERM_UNC_ALG1: cfg.method = qterm::UncMethod::Alg1; break;
    case QTERM_UNC_BBQ: cfg.method = qterm::UncMethod::Bbq; break;
    case QTERM_UNC_GBB: cfg.method = qterm::UncMethod::Bb1; break;
    default: throw qterm::Error(qterm::ErrorCode::InvalidSpec, "unknown unconstrained method");
  }
  if (opt->alpha1 > 0.0) cfg.alpha1 = opt->alpha1;
  cfg.trace = opt->trace != 0;
  return cfg;
}

}  // namespace

qterm_status qterm_unc_solve(qterm_value_fn value, qterm_gradient_fn gradient, void* user,
                             const double* x0, size_t n, const qterm_unc_options* opt,
                             qterm_report** out) {
  return guarded([&] {
    if (!value || !gradient || !x0 || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    qterm::ObjectiveFn fn;
    fn.name = "user";
    fn.dimension = n;
    fn.value = [value, user](std::span<const double> x) { return value(x.data(), x.size(), user); };
    fn.gradient = [gradient, user](std::span<const double> x, std::span<double> g) {
      gradient(x.data(), g.data(), x.size(), user);
    };
    fn.start.assign(x0, x0 + n);
    auto rep = std::make_unique<qterm_report>();
    rep->r = qterm::solve(fn, fn.start, unc_config(opt));
    *out = rep.release();
    return QTERM_OK;
  });
}

qterm_status qterm_unc_solve_builtin(const char* name, const qterm_unc_options* opt,
                                     qterm_report** out) {
  return guarded([&] {
    if (!name || !out) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    const auto fn = qterm::builtin_by_name(name);
    auto rep = std::make_unique<qterm_report>();
    rep->r = qterm::solve(fn, fn.start, unc_config(opt));
    *out = rep.release();
    return QTERM_OK;
  });
}

namespace {

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& f : qterm::builtin_suite()) v.push_back(f.name);
    return v;
  }();
  return names;
}

}  // namespace

size_t qterm_builtin_count(void) { return builtin_names().size(); }

const char* qterm_builtin_name(size_t i) {
  const auto& names = builtin_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

// ---- experiments -----------------------------------------------------------

qterm_status qterm_experiment_new(qterm_experiment** out) {
  return guarded([&] {
    if (!out) return fail(QTERM_ERR_INVALID_INPUT, "null output pointer");
    *out = new qterm_experiment{};
    return QTERM_OK;
  });
}

void qterm_experiment_free(qterm_experiment* e) { delete e; }

qterm_status qterm_experiment_load_file(qterm_experiment* e, const char* path) {
  return guarded([&] {
    if (!e || !path) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    std::ifstream in(path);
    if (!in) return fail(QTERM_ERR_IO, std::string("cannot open config file: ") + path);
    qterm::merge_config(e->spec, in);  // leaves the spec untouched on error
    return QTERM_OK;
  });
}

qterm_status qterm_experiment_set(qterm_experiment* e, const char* key, const char* value) {
  return guarded([&] {
    if (!e || !key || !value) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    qterm::apply_setting(e->spec, key, value);
    return QTERM_OK;
  });
}

qterm_status qterm_experiment_validate(const qterm_experiment* e) {
  return guarded([&] {
    if (!e) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    e->spec.validate();
    return QTERM_OK;
  });
}

const char* qterm_experiment_print(qterm_experiment* e) {
  if (!e) return "";
  try {
    e->printed = qterm::print_config(e->spec);
  } catch (...) {
    e->printed.clear();
  }
  return e->printed.c_str();
}

qterm_status qterm_experiment_run(qterm_experiment* e) {
  return guarded([&] {
    if (!e) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    e->files = qterm::run_experiment(e->spec);
    return QTERM_OK;
  });
}

const char* qterm_experiment_output(const qterm_experiment* e, int which) {
  if (!e) return "";
  switch (which) {
    case 0: return e->files.runs.c_str();
    case 1: return e->files.aggregates.c_str();
    case 2: return e->files.trace.c_str();
    default: return "";
  }
}

qterm_status qterm_profile(const char* runs_csv, const char* metric, const char* out_csv) {
  return guarded([&] {
    if (!runs_csv || !metric || !out_csv) return fail(QTERM_ERR_INVALID_INPUT, "null argument");
    const auto m = qterm::profile_metric_from_string(metric);
    std::ifstream in(runs_csv);
    if (!in) return fail(QTERM_ERR_IO, std::string("cannot open run table: ") + runs_csv);
    const auto curves = qterm::performance_profile(qterm::read_runs(in), m);
    std::ofstream os(out_csv, std::ios::binary | std::ios::trunc);
    if (!os) return fail(QTERM_ERR_IO, std::string("cannot open output file: ") + out_csv);
    qterm::write_profile(os, curves);
    os.flush();
    if (!os) return fail(QTERM_ERR_IO, std::string("write failed: ") + out_csv);
    return QTERM_OK;
  });
}

}  // extern "C"
