#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "qterm/quadprob.hpp"
#include "qterm/report.hpp"

namespace qterm {

struct QuadSolverConfig {
  double tau1 = 0.65;
  double gamma = 1.4;
  double eps = 1e-6;  // stop once ||g_k|| <= eps ||g_1||
  std::size_t max_iter = 50000;
  bool trace = false;

  /// Throws Error(InvalidSpec) unless tau1 in (0, 1], gamma >= 1, eps > 0.
  void validate() const;
};

/// BB1 gradient method: alpha_1 = SD, alpha_k = bb1 afterwards.
RunReport solve_bb(const QuadraticProblem& p, std::span<const double> x0,
                   const QuadSolverConfig& cfg);

/// Adaptive method: alpha_1 = SD, alpha_{2,3,4} = bb1, then for k >= 5
/// the long bb1 step or the short min{bb2_{k-1}, bb2_k, alpha_new} (falling
/// back to alpha_bbq, then to the BB2 pair) as bb2_k / bb1_k < tau_k.
RunReport solve_new(const QuadraticProblem& p, std::span<const double> x0,
                    const QuadSolverConfig& cfg);

/// Same adaptive frame with alpha_bbq as the only extra short candidate.
RunReport solve_bbq(const QuadraticProblem& p, std::span<const double> x0,
                    const QuadSolverConfig& cfg);

enum class Verify3dMethod { Day3d, Bb1_3d, Bb2_3d, PlainBb1 };

const char* to_string(Verify3dMethod m) noexcept;

/// Three-dimensional termination schedule on verification_problem(kappa):
/// alpha_1 = SD, alpha_3 = alpha_new from the Hessian projected on the
/// Gram-Schmidt basis of g_1, g_2, g_3, alpha_6 = alpha_bbq, the method's
/// own stepsize elsewhere (PlainBb1 uses bb1 everywhere after SD). Takes 8
/// steps and reports ||g_9|| and f(x_9). A degenerate special step ends the
/// run with RunStatus::Degenerate.
RunReport verify_3d_termination(double kappa, Verify3dMethod method, std::uint64_t seed,
                                bool trace = false);

}  // namespace qterm
