#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "qterm/result.hpp"
#include "qterm/vec.hpp"

namespace qterm {

/// Dependence threshold for Gram-Schmidt and the 1 - sigma floor of the
/// recurrence.
inline constexpr double kTolDep = 1e-10;
/// |p| below this (relative to max(1, tr(H^2))) means a triple eigenvalue.
inline constexpr double kTripleTol = 1e-12;

/// Symmetric 3x3 or 4x4 projected Hessian with cached spectral scalars.
struct HMatrix {
  int dim = 3;
  std::array<double, 16> entries{};  // row-major, dim x dim
  double trace = 0.0;
  double trace_sq = 0.0;  // tr(H^2)
  double trace_cu = 0.0;  // tr(H^3)
  double det = 0.0;

  double operator()(int i, int j) const { return entries[i * dim + j]; }

  /// Builds from row-major entries, symmetrizing and caching the scalars.
  static HMatrix from_entries(int dim, std::span<const double> rowmajor);
};

/// Trigonometric solution of the characteristic cubic of a 3x3 HMatrix.
struct CubicSolve {
  double p = 0.0;      // (tr^2 - 3 tr(H^2)) / 6
  double q = 0.0;      // (5 tr^3 - 9 tr tr(H^2)) / 54 - det
  double theta = 0.0;  // in [0, pi]
  double largest_root = 0.0;
  bool triple_safeguard = false;
};

struct OrthoBasis3 {
  Vector u, v, r;
};

/// Hessian-vector product.
using HessVec = std::function<Vector(std::span<const double>)>;

/// Orthonormalizes (a, b, c) in order. Two passes of modified Gram-Schmidt
/// per vector; LinearDependence when a residual norm drops below
/// kTolDep times the norm of the vector being orthogonalized.
Result<OrthoBasis3> gram_schmidt3(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> c);

/// H = Q'AQ for the orthonormal columns of Q (3 or 4 of them).
HMatrix project_hessian(std::span<const Vector> basis, const HessVec& hess_vec);
HMatrix project_hessian(const OrthoBasis3& basis, const HessVec& hess_vec);

/// Largest root of z^3 - tr z^2 + ((tr^2 - tr(H^2))/2) z - det = 0, i.e.
/// lambda_max(H), via the trigonometric formula
///   tr/3 + 2 cos(theta/3) sqrt(|p|/3),  theta = arccos(-q/2 (3/|p|)^{3/2}).
/// p and q are evaluated on the trace-free part H - (tr/3) I, which gives
/// the same values without the cancellation in tr^2 - 3 tr(H^2).
Result<CubicSolve> largest_root_cubic(const HMatrix& h);

/// lambda_max of a 4x4 HMatrix: bisection on the characteristic quartic
///   z^4 - tr z^3 + ((tr^2 - tr(H^2))/2) z^2 - theta z + det,
///   theta = (tr^3 + 2 tr(H^3) - 3 tr tr(H^2)) / 6,
/// inside Gershgorin bounds. The bracket test is "quartic and all its
/// derivatives are nonnegative", which holds exactly for z >= lambda_max
/// and so copes with repeated roots.
Result<double> largest_root_quartic(const HMatrix& h);

/// 1 / lambda_max(Q'AQ) for an orthonormal triple.
Result<double> alpha_new_direct(const OrthoBasis3& basis, const HessVec& hess_vec);

/// One iterate's bookkeeping. bb1/bb2 at index j come from the pair
/// (s_{j-1}, y_{j-1}); step is the stepsize actually taken from x_j.
struct HistoryRecord {
  double gnorm_sq = 0.0;
  std::optional<double> step;
  std::optional<double> bb1;
  std::optional<double> bb2;
};

/// Rolling window of the last four iterates. lag 0 is the current iterate k.
class GradientHistory {
 public:
  static constexpr std::size_t kCapacity = 4;

  void push(double gnorm_sq, std::optional<double> bb1, std::optional<double> bb2);
  /// Records the step taken from the current iterate.
  void set_step(double step);
  void clear() { count_ = 0; }

  std::size_t size() const { return count_ < kCapacity ? count_ : kCapacity; }
  const HistoryRecord& at_lag(std::size_t lag) const;

 private:
  std::array<HistoryRecord, kCapacity> ring_{};
  std::size_t count_ = 0;  // total pushes
};

/// Scalars that determine H_k for the BB1 method from stepsizes and
/// gradient norms of iterates k-3..k.
struct RecurrenceScalars {
  double sigma = 0.0;     // squared cosine between g_{k-2} and g_{k-3}
  double delta = 0.0;
  double zeta = 0.0;
  double gamma = 0.0;
  double varsigma = 0.0;
  double g_r = 0.0;       // g_{k-1}' rbar_k
  double g_Ar = 0.0;      // g_{k-1}' A rbar_k
};

/// Degenerate when fewer than four records, a required BB1 value or step
/// is missing or nonpositive, |zeta| <= kTolDep, or sigma >= 1 - kTolDep.
Result<RecurrenceScalars> recurrence_scalars(const GradientHistory& hist);

/// Assembles H_k:
///   [ 1/bb1_{k-2}   h12    0   ]
///   [ h12           h22    h23 ]
///   [ 0             h23    h33 ]
/// Degenerate when g_r <= 0 or an entry is not finite.
Result<HMatrix> hmatrix_from_recurrence(const RecurrenceScalars& scal,
                                        const GradientHistory& hist);

/// Full composition: recurrence -> H_k -> cubic -> reciprocal.
Result<double> alpha_new_bb(const GradientHistory& hist);

}  // namespace qterm
