#include "qterm/quadsolver.hpp"

#include <chrono>
#include <cmath>

#include "qterm/adaptive.hpp"
#include "qterm/result.hpp"
#include "qterm/stepsizes.hpp"
#include "qterm/termination3d.hpp"

namespace qterm {

const char* to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Ok: return "ok";
    case RunStatus::MaxIterExceeded: return "max_iter";
    case RunStatus::FevalBudgetExceeded: return "max_fevals";
    case RunStatus::LineSearchFailure: return "line_search_failure";
    case RunStatus::Degenerate: return "degenerate";
    case RunStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

const char* to_string(Branch branch) noexcept {
  switch (branch) {
    case Branch::Sd: return "sd";
    case Branch::Initial: return "initial";
    case Branch::WarmupBb1: return "warmup_bb1";
    case Branch::Bb1: return "bb1";
    case Branch::Bb2: return "bb2";
    case Branch::Day: return "day";
    case Branch::ShortNew: return "short_new";
    case Branch::ShortBbq: return "short_bbq";
    case Branch::ShortBb2Min: return "short_bb2min";
    case Branch::ShortBb2: return "short_bb2";
    case Branch::NewDirect: return "new_direct";
    case Branch::Bbq: return "bbq";
    case Branch::CurvatureFallback: return "curvature_fallback";
  }
  return "unknown";
}

const char* to_string(Verify3dMethod m) noexcept {
  switch (m) {
    case Verify3dMethod::Day3d: return "DAY3D";
    case Verify3dMethod::Bb1_3d: return "BB1-3D";
    case Verify3dMethod::Bb2_3d: return "BB2-3D";
    case Verify3dMethod::PlainBb1: return "BB1";
  }
  return "unknown";
}

void QuadSolverConfig::validate() const {
  if (!(tau1 > 0.0 && tau1 <= 1.0)) throw Error(ErrorCode::InvalidSpec, "tau1 must lie in (0, 1]");
  if (!(gamma >= 1.0)) throw Error(ErrorCode::InvalidSpec, "gamma must be >= 1");
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidSpec, "eps must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

enum class QuadMethod { Bb, New, Bbq };

RunReport run_quadratic(const QuadraticProblem& p, std::span<const double> x0,
                        const QuadSolverConfig& cfg, QuadMethod method) {
  cfg.validate();
  if (x0.size() != p.dimension())
    throw Error(ErrorCode::InvalidInput, "start point dimension mismatch");
  const auto start = Clock::now();
  const std::size_t n = p.dimension();

  RunReport rep;
  Vector x(x0.begin(), x0.end());
  Vector g = p.gradient(x);
  Vector g_new(n), s(n), y(n);
  rep.ngrad = 1;
  const double g1 = norm2(g);
  const double target = cfg.eps * g1;
  double gnorm = g1;

  GradientHistory hist;
  hist.push(gnorm * gnorm, std::nullopt, std::nullopt);
  double tau = cfg.tau1;
  std::size_t k = 1;

  auto finish = [&](RunStatus st) {
    rep.status = st;
    rep.final_gnorm = gnorm;
    rep.final_f = p.value(x);
    rep.x = x;
    rep.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
  };

  if (!all_finite(x)) return finish(RunStatus::NumericalFailure);
  if (gnorm <= target) return finish(RunStatus::Ok);

  double alpha = 0.0;
  Branch branch = Branch::Sd;
  double tau_used = tau;
  {
    const auto sd = sd_stepsize(g, p.hess_vec(g));
    if (!sd) return finish(RunStatus::NumericalFailure);
    alpha = *sd;
  }

  for (;;) {
    if (rep.iterations >= cfg.max_iter) return finish(RunStatus::MaxIterExceeded);
    if (cfg.trace) rep.trace.push_back({k, alpha, alpha, branch, gnorm, p.value(x), tau_used});
    rep.count(branch);

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = -alpha * g[i];
      x[i] += s[i];
    }
    p.gradient(x, g_new);
    ++rep.ngrad;
    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
    g.swap(g_new);
    gnorm = norm2(g);
    ++rep.iterations;
    ++k;

    const StepPair pair = StepPair::from_vectors(s, y);
    const auto b1 = bb1(pair);
    const auto b2 = bb2(pair);
    hist.set_step(alpha);
    hist.push(gnorm * gnorm, b1 ? std::optional(*b1) : std::nullopt,
              b2 ? std::optional(*b2) : std::nullopt);

    if (!std::isfinite(gnorm)) return finish(RunStatus::NumericalFailure);
    if (gnorm <= target) return finish(RunStatus::Ok);
    if (!b1 || !b2) return finish(RunStatus::NumericalFailure);

    tau_used = tau;
    if (method == QuadMethod::Bb) {
      alpha = *b1;
      branch = Branch::Bb1;
    } else if (k <= 4) {
      alpha = *b1;
      branch = Branch::WarmupBb1;
    } else {
      const auto d = adaptive_step(hist, tau, ShortRule::Quadratic, method == QuadMethod::New);
      if (!d) return finish(RunStatus::NumericalFailure);
      alpha = d->alpha;
      branch = d->branch;
      tau = update_tau(tau, cfg.gamma, d->short_step);
    }
  }
}

}  // namespace

RunReport solve_bb(const QuadraticProblem& p, std::span<const double> x0,
                   const QuadSolverConfig& cfg) {
  return run_quadratic(p, x0, cfg, QuadMethod::Bb);
}

RunReport solve_new(const QuadraticProblem& p, std::span<const double> x0,
                    const QuadSolverConfig& cfg) {
  return run_quadratic(p, x0, cfg, QuadMethod::New);
}

RunReport solve_bbq(const QuadraticProblem& p, std::span<const double> x0,
                    const QuadSolverConfig& cfg) {
  return run_quadratic(p, x0, cfg, QuadMethod::Bbq);
}

RunReport verify_3d_termination(double kappa, Verify3dMethod method, std::uint64_t seed,
                                bool trace) {
  const auto start = Clock::now();
  const QuadraticProblem p = verification_problem(kappa);
  constexpr std::size_t kSteps = 8;  // x_1 .. x_9

  RunReport rep;
  Vector x = random_start(3, seed, 0);
  Vector g = p.gradient(x);
  rep.ngrad = 1;
  std::vector<Vector> grads{g};
  std::vector<double> bb1s(kSteps + 2, 0.0), bb2s(kSteps + 2, 0.0);
  StepPair last{};

  auto finish = [&](RunStatus st) {
    rep.status = st;
    rep.final_gnorm = norm2(g);
    rep.final_f = p.value(x);
    rep.x = x;
    rep.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
  };

  for (std::size_t k = 1; k <= kSteps; ++k) {
    if (norm2(g) == 0.0) return finish(RunStatus::Ok);
    double alpha = 0.0;
    Branch branch = Branch::Bb1;
    Result<double> step = ErrorCode::Degenerate;
    if (k == 1) {
      step = sd_stepsize(g, p.hess_vec(g));
      branch = Branch::Sd;
    } else if (k == 3 && method != Verify3dMethod::PlainBb1) {
      const auto basis = gram_schmidt3(grads[0], grads[1], grads[2]);
      if (!basis) {
        rep.message = "gram-schmidt of g1, g2, g3 failed";
        return finish(RunStatus::Degenerate);
      }
      step = alpha_new_direct(*basis, [&](std::span<const double> d) { return p.hess_vec(d); });
      branch = Branch::NewDirect;
    } else if (k == 6 && method != Verify3dMethod::PlainBb1) {
      step = bbq_stepsize(bb1s[5], bb1s[6], bb2s[5], bb2s[6]);
      branch = Branch::Bbq;
    } else {
      switch (method) {
        case Verify3dMethod::Day3d:
          step = day_stepsize(last);
          branch = Branch::Day;
          break;
        case Verify3dMethod::Bb2_3d:
          step = bb2(last);
          branch = Branch::Bb2;
          break;
        default:
          step = bb1(last);
          branch = Branch::Bb1;
          break;
      }
    }
    if (!step) {
      rep.message = std::string("stepsize failed at k=") + std::to_string(k) + ": " +
                    qterm::to_string(step.error());
      return finish(RunStatus::Degenerate);
    }
    alpha = *step;
    if (trace) rep.trace.push_back({k, alpha, alpha, branch, norm2(g), p.value(x), 0.0});
    rep.count(branch);

    Vector s(3), y(3);
    for (int i = 0; i < 3; ++i) {
      s[i] = -alpha * g[i];
      x[i] += s[i];
    }
    Vector g_new = p.gradient(x);
    ++rep.ngrad;
    for (int i = 0; i < 3; ++i) y[i] = g_new[i] - g[i];
    g = std::move(g_new);
    grads.push_back(g);
    ++rep.iterations;
    last = StepPair::from_vectors(s, y);
    bb1s[k + 1] = bb1(last).value_or(0.0);
    bb2s[k + 1] = bb2(last).value_or(0.0);
  }
  return finish(RunStatus::Ok);
}

}  // namespace qterm
