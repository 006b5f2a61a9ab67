/* C interface to the qterm gradient-method library.
 *
 * Conventions:
 *   - Every fallible call returns a qterm_status. On failure,
 *     qterm_last_error() returns a message for the calling thread; it stays
 *     valid until the next failing call on that thread.
 *   - Handles are opaque and owned by the caller; release each with its
 *     *_free function. Freeing NULL is a no-op.
 *   - Arrays are passed as (pointer, length). Strings returned by accessors
 *     are owned by the handle and live as long as it does.
 */
#ifndef QTERM_QTERM_H
#define QTERM_QTERM_H

#include <stddef.h>
#include <stdint.h>

#if defined(QTERM_BUILDING_LIBRARY)
#define QTERM_API __attribute__((visibility("default")))
#else
#define QTERM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qterm_status {
  QTERM_OK = 0,
  QTERM_ERR_NONPOSITIVE_CURVATURE = 1,
  QTERM_ERR_ZERO_DENOMINATOR = 2,
  QTERM_ERR_DEGENERATE = 3,
  QTERM_ERR_LINEAR_DEPENDENCE = 4,
  QTERM_ERR_NUMERICAL_FAILURE = 5,
  QTERM_ERR_NON_DESCENT_DIRECTION = 6,
  QTERM_ERR_LINE_SEARCH_FAILURE = 7,
  QTERM_ERR_INVALID_SPEC = 8,
  QTERM_ERR_INVALID_INPUT = 9,
  QTERM_ERR_IO = 10,
  QTERM_ERR_INTERNAL = 11
} qterm_status;

QTERM_API const char* qterm_version(void);
QTERM_API const char* qterm_status_string(qterm_status status);
QTERM_API const char* qterm_last_error(void);

/* ---- stepsizes -------------------------------------------------------- */

QTERM_API qterm_status qterm_bb1(const double* s, const double* y, size_t n, double* out);
QTERM_API qterm_status qterm_bb2(const double* s, const double* y, size_t n, double* out);
/* g'g / g'Ag given g and Ag. */
QTERM_API qterm_status qterm_sd(const double* g, const double* ag, size_t n, double* out);
QTERM_API qterm_status qterm_day(const double* s, const double* y, size_t n, double* out);
/* Two-dimensional termination stepsize from consecutive (bb1, bb2) pairs. */
QTERM_API qterm_status qterm_bbq(double bb1_prev, double bb2_prev, double bb1_cur,
                                 double bb2_cur, double* out);

/* Largest eigenvalue of a symmetric 3x3 (closed form) or 4x4 (bisection on
 * the characteristic quartic) matrix given row-major. */
QTERM_API qterm_status qterm_largest_root(const double* h, int dim, double* out);

/* ---- quadratic problems ----------------------------------------------- */

typedef struct qterm_problem qterm_problem;

/* Diagonal test quadratic from spectrum distribution `set` (1..5). */
QTERM_API qterm_status qterm_problem_generate(int set, size_t n, double kappa, uint64_t seed,
                                              qterm_problem** out);
/* 3-D problem 1/2 x'diag(1, kappa/2, kappa)x. */
QTERM_API qterm_status qterm_problem_verification(double kappa, qterm_problem** out);
QTERM_API qterm_status qterm_problem_read(const char* path, qterm_problem** out);
QTERM_API qterm_status qterm_problem_write(const qterm_problem* p, const char* path);
QTERM_API void qterm_problem_free(qterm_problem* p);

QTERM_API size_t qterm_problem_dim(const qterm_problem* p);
QTERM_API double qterm_problem_kappa(const qterm_problem* p);
QTERM_API qterm_status qterm_problem_spectrum(const qterm_problem* p, double* out, size_t len);
QTERM_API qterm_status qterm_problem_value(const qterm_problem* p, const double* x, size_t n,
                                           double* f);
QTERM_API qterm_status qterm_problem_gradient(const qterm_problem* p, const double* x, size_t n,
                                              double* g);
/* Start point with entries uniform in [-10, 10]. */
QTERM_API qterm_status qterm_random_start(size_t n, uint64_t seed, uint64_t replicate,
                                          double* out);

/* ---- run reports ------------------------------------------------------ */

typedef struct qterm_report qterm_report;

typedef struct qterm_trace_entry {
  size_t k;
  double step;
  double taken;
  const char* branch;
  double gnorm;
  double f;
  double tau;
} qterm_trace_entry;

QTERM_API void qterm_report_free(qterm_report* r);
/* "ok", "max_iter", "max_fevals", "line_search_failure", "degenerate",
 * "numerical_failure". */
QTERM_API const char* qterm_report_status(const qterm_report* r);
QTERM_API int qterm_report_ok(const qterm_report* r);
QTERM_API size_t qterm_report_iterations(const qterm_report* r);
QTERM_API size_t qterm_report_nfe(const qterm_report* r);
QTERM_API size_t qterm_report_ngrad(const qterm_report* r);
QTERM_API double qterm_report_final_gnorm(const qterm_report* r);
QTERM_API double qterm_report_final_f(const qterm_report* r);
QTERM_API double qterm_report_wall_time(const qterm_report* r);
QTERM_API const char* qterm_report_message(const qterm_report* r);
QTERM_API size_t qterm_report_dim(const qterm_report* r);
QTERM_API qterm_status qterm_report_x(const qterm_report* r, double* out, size_t len);
QTERM_API size_t qterm_report_branch_count(const qterm_report* r, const char* branch);
QTERM_API size_t qterm_report_trace_length(const qterm_report* r);
QTERM_API qterm_status qterm_report_trace_entry(const qterm_report* r, size_t i,
                                                qterm_trace_entry* out);

/* ---- quadratic solvers ------------------------------------------------ */

typedef enum qterm_quad_method { QTERM_QUAD_BB = 0, QTERM_QUAD_NEW = 1, QTERM_QUAD_BBQ = 2 } qterm_quad_method;

typedef struct qterm_quad_options {
  double tau1;
  double gamma;
  double eps; /* stop once ||g_k|| <= eps ||g_1|| */
  size_t max_iter;
  int trace;
} qterm_quad_options;

QTERM_API void qterm_quad_options_default(qterm_quad_options* opt);
QTERM_API qterm_status qterm_quad_solve(const qterm_problem* p, qterm_quad_method method,
                                        const double* x0, size_t n, const qterm_quad_options* opt,
                                        qterm_report** out);

typedef enum qterm_verify3d_method {
  QTERM_VERIFY_DAY3D = 0,
  QTERM_VERIFY_BB1_3D = 1,
  QTERM_VERIFY_BB2_3D = 2,
  QTERM_VERIFY_PLAIN_BB1 = 3
} qterm_verify3d_method;

/* Eight-step three-dimensional termination schedule; the report holds
 * ||g_9|| and f(x_9). */
QTERM_API qterm_status qterm_verify3d(double kappa, qterm_verify3d_method method, uint64_t seed,
                                      int trace, qterm_report** out);

/* ---- general unconstrained solver ------------------------------------- */

typedef enum qterm_unc_method { QTERM_UNC_ALG1 = 0, QTERM_UNC_BBQ = 1, QTERM_UNC_GBB = 2 } qterm_unc_method;

typedef struct qterm_unc_options {
  double alpha_min;
  double alpha_max;
  size_t T;
  double delta;
  double eta;
  double tau1;
  double gamma;
  double eps_inf;
  size_t max_iter;
  size_t max_backtracks;
  size_t max_fevals;
  qterm_unc_method method;
  double alpha1; /* <= 0 selects ||x||_inf / ||g||_inf */
  int trace;
} qterm_unc_options;

typedef double (*qterm_value_fn)(const double* x, size_t n, void* user);
typedef void (*qterm_gradient_fn)(const double* x, double* g, size_t n, void* user);

QTERM_API void qterm_unc_options_default(qterm_unc_options* opt);
QTERM_API qterm_status qterm_unc_solve(qterm_value_fn value, qterm_gradient_fn gradient,
                                       void* user, const double* x0, size_t n,
                                       const qterm_unc_options* opt, qterm_report** out);
/* Solves a builtin test function from its standard start. */
QTERM_API qterm_status qterm_unc_solve_builtin(const char* name, const qterm_unc_options* opt,
                                               qterm_report** out);
QTERM_API size_t qterm_builtin_count(void);
QTERM_API const char* qterm_builtin_name(size_t i);

/* ---- experiments ------------------------------------------------------ */

typedef struct qterm_experiment qterm_experiment;

QTERM_API qterm_status qterm_experiment_new(qterm_experiment** out);
QTERM_API void qterm_experiment_free(qterm_experiment* e);
/* Applies a key=value config file on top of the current settings. */
QTERM_API qterm_status qterm_experiment_load_file(qterm_experiment* e, const char* path);
QTERM_API qterm_status qterm_experiment_set(qterm_experiment* e, const char* key,
                                            const char* value);
QTERM_API qterm_status qterm_experiment_validate(const qterm_experiment* e);
/* Canonical key=value text of the current settings. */
QTERM_API const char* qterm_experiment_print(qterm_experiment* e);
/* Runs and writes <out>_runs.csv, <out>_agg.csv and, when tracing,
 * <out>_trace.csv. */
QTERM_API qterm_status qterm_experiment_run(qterm_experiment* e);
/* Path written by the last run: which = 0 runs, 1 aggregates, 2 trace. */
QTERM_API const char* qterm_experiment_output(const qterm_experiment* e, int which);

/* Performance profile of a runs CSV; metric is "iter" or "time". */
QTERM_API qterm_status qterm_profile(const char* runs_csv, const char* metric,
                                     const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* QTERM_QTERM_H */
