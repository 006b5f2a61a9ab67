#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "qterm/vec.hpp"

namespace qterm {

/// TESTQP:   f(x) = (x - x*)' diag(v) (x - x*)
/// HALFFORM: f(x) = 1/2 x' diag(v) x   (b = 0, minimizer 0)
enum class QuadForm { TestQp, HalfForm };

const char* to_string(QuadForm form) noexcept;

/// Diagonal SPD quadratic with known spectrum and minimizer. Immutable once
/// built; safe to share across threads.
struct QuadraticProblem {
  int set_id = 0;  // 1..5 for generated sets, 0 for the 3-D verification problem
  Vector spectrum;
  Vector x_star;
  QuadForm form = QuadForm::TestQp;
  double kappa = 1.0;            // max(spectrum) / min(spectrum)
  double requested_kappa = 1.0;  // generator input
  std::uint64_t seed = 0;

  std::size_t dimension() const { return spectrum.size(); }

  double value(std::span<const double> x) const;
  Vector gradient(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;
  Vector hess_vec(std::span<const double> d) const;

  /// Curvature factor: 2 for TESTQP, 1 for HALFFORM.
  double hessian_scale() const { return form == QuadForm::TestQp ? 2.0 : 1.0; }
  /// Extreme Hessian eigenvalues (scaled spectrum).
  double lambda_min() const;
  double lambda_max() const;
};

/// One of the five spectrum distributions. Throws Error(InvalidSpec) for
/// n < 3, kappa <= 1, odd n with set 2, or n not divisible by 5 with sets
/// 3 and 5.
QuadraticProblem generate(int set_id, std::size_t n, double kappa, std::uint64_t seed);

/// 3-D HALFFORM problem with spectrum (1, kappa/2, kappa).
QuadraticProblem verification_problem(double kappa);

/// Start point with components uniform in [-10, 10], drawn from the stream
/// keyed by (seed, replicate).
Vector random_start(std::size_t n, std::uint64_t seed, std::uint64_t replicate);

/// Plain-text provenance format:
///   set,n,kappa,seed,form
///   <set>,<n>,<kappa>,<seed>,<TESTQP|HALFFORM>
///   one spectrum value per line
void write_problem(std::ostream& os, const QuadraticProblem& p);
/// Reads the format above. x_star is not stored, so it is regenerated from
/// the seed for sets 1..5 and zero for set 0.
QuadraticProblem read_problem(std::istream& is);

}  // namespace qterm
