#include "qterm/uncsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qterm/adaptive.hpp"
#include "qterm/linesearch.hpp"
#include "qterm/result.hpp"
#include "qterm/stepsizes.hpp"
#include "qterm/termination3d.hpp"

namespace qterm {

const char* to_string(UncMethod m) noexcept {
  switch (m) {
    case UncMethod::Alg1: return "alg1";
    case UncMethod::Bbq: return "bbq";
    case UncMethod::Bb1: return "gbb";
  }
  return "unknown";
}

void UncSolverConfig::validate() const {
  if (!(alpha_min > 0.0 && alpha_min < alpha_max))
    throw Error(ErrorCode::InvalidSpec, "need 0 < alpha_min < alpha_max");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::InvalidSpec, "delta must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::InvalidSpec, "eta must lie in (0, 1)");
  if (!(gamma >= 1.0)) throw Error(ErrorCode::InvalidSpec, "gamma must be >= 1");
  if (!(tau1 > 0.0)) throw Error(ErrorCode::InvalidSpec, "tau1 must be positive");
  if (T == 0) throw Error(ErrorCode::InvalidSpec, "T must be >= 1");
  if (!(eps_inf > 0.0)) throw Error(ErrorCode::InvalidSpec, "eps_inf must be positive");
  if (alpha1 && !(*alpha1 > 0.0)) throw Error(ErrorCode::InvalidSpec, "alpha1 must be positive");
}

namespace {

double min_norm_step(std::span<const double> x, double ginf) {
  return std::min(1.0 / ginf, norm_inf(x) / ginf);
}

}  // namespace

RunReport solve(const ObjectiveFn& fn, std::span<const double> x0, const UncSolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != fn.dimension) throw Error(ErrorCode::InvalidInput, "start point dimension mismatch");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::size_t n = fn.dimension;

  RunReport rep;
  Vector x(x0.begin(), x0.end());
  Vector g(n), x_new(n), g_new(n), s(n), y(n);
  double f = fn.value(x);
  fn.gradient(x, g);
  rep.nfe = 1;
  rep.ngrad = 1;
  double ginf = norm_inf(g);

  auto finish = [&](RunStatus st) {
    rep.status = st;
    rep.final_gnorm = ginf;
    rep.final_f = f;
    rep.x = x;
    rep.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
  };

  if (!std::isfinite(f) || !all_finite(g)) return finish(RunStatus::NumericalFailure);
  if (ginf <= cfg.eps_inf) return finish(RunStatus::Ok);

  auto clamp = [&](double a) { return std::clamp(a, cfg.alpha_min, cfg.alpha_max); };

  double alpha = cfg.alpha1 ? *cfg.alpha1 : (norm_inf(x) > 0.0 ? norm_inf(x) / ginf : 1.0 / ginf);
  alpha = clamp(alpha);
  Branch branch = Branch::Initial;
  double tau = cfg.tau1;
  double tau_used = tau;
  ReferenceState ref = ReferenceState::init(f, cfg.T);
  GradientHistory hist;
  hist.push(dot(g, g), std::nullopt, std::nullopt);
  std::size_t k = 1;
  Vector d(n);

  for (;;) {
    if (rep.iterations >= cfg.max_iter) return finish(RunStatus::MaxIterExceeded);
    if (rep.nfe >= cfg.max_fevals) return finish(RunStatus::FevalBudgetExceeded);

    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    const auto ls = dai_fletcher_search(fn.value, x, g, d, alpha, ref.f_r, cfg.delta, cfg.eta,
                                        cfg.max_backtracks, x_new);
    if (!ls) {
      rep.message = std::string("line search: ") + to_string(ls.error());
      return finish(RunStatus::LineSearchFailure);
    }
    rep.nfe += ls->nfe;
    const double lambda = ls->lambda;
    if (cfg.trace) rep.trace.push_back({k, alpha, lambda, branch, norm2(g), f, tau_used});
    rep.count(branch);

    fn.gradient(x_new, g_new);
    ++rep.ngrad;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    ref = update_reference(ref, ls->f_new);
    x.swap(x_new);
    g.swap(g_new);
    f = ls->f_new;
    ginf = norm_inf(g);
    ++rep.iterations;
    ++k;

    const StepPair pair = StepPair::from_vectors(s, y);
    const auto b1 = bb1(pair);
    const auto b2 = bb2(pair);
    hist.set_step(lambda);
    hist.push(dot(g, g), b1 ? std::optional(*b1) : std::nullopt,
              b2 ? std::optional(*b2) : std::nullopt);

    if (!std::isfinite(f) || !all_finite(g)) return finish(RunStatus::NumericalFailure);
    if (ginf <= cfg.eps_inf) return finish(RunStatus::Ok);

    tau_used = tau;
    if (pair.s_dot_y > 0.0 && b1 && b2) {
      if (k <= 4 || cfg.method == UncMethod::Bb1) {
        alpha = *b1;
        branch = k <= 4 ? Branch::WarmupBb1 : Branch::Bb1;
      } else {
        const auto dec = adaptive_step(hist, tau, ShortRule::General,
                                       cfg.method == UncMethod::Alg1);
        alpha = dec->alpha;
        branch = dec->branch;
        tau = update_tau(tau, cfg.gamma, dec->short_step);
      }
    } else {
      alpha = min_norm_step(x, ginf);
      branch = Branch::CurvatureFallback;
    }
    alpha = clamp(alpha);
  }
}

}  // namespace qterm
