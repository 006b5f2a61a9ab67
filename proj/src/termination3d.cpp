#include "qterm/termination3d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qterm {

namespace {

double det3(const std::array<double, 16>& m, int dim) {
  auto e = [&](int i, int j) { return m[i * dim + j]; };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
         e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

double det4(const std::array<double, 16>& m) {
  // Laplace expansion along the first row.
  double total = 0.0;
  for (int col = 0; col < 4; ++col) {
    std::array<double, 16> minor{};
    int idx = 0;
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (j != col) minor[idx++] = m[i * 4 + j];
    const double sign = (col % 2 == 0) ? 1.0 : -1.0;
    total += sign * m[col] * det3(minor, 3);
  }
  return total;
}

struct TraceScalars {
  double tr, tr2, tr3, det;
};

TraceScalars trace_scalars(const std::array<double, 16>& m, int dim) {
  TraceScalars s{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) s.tr += m[i * dim + i];
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      s.tr2 += m[i * dim + j] * m[j * dim + i];
      for (int k = 0; k < dim; ++k)
        s.tr3 += m[i * dim + j] * m[j * dim + k] * m[k * dim + i];
    }
  s.det = dim == 3 ? det3(m, 3) : det4(m);
  return s;
}

std::array<double, 16> shifted(const HMatrix& h, double shift) {
  std::array<double, 16> b = h.entries;
  for (int i = 0; i < h.dim; ++i) b[i * h.dim + i] -= shift;
  return b;
}

}  // namespace

HMatrix HMatrix::from_entries(int dim, std::span<const double> rowmajor) {
  if ((dim != 3 && dim != 4) || rowmajor.size() != static_cast<std::size_t>(dim * dim))
    throw Error(ErrorCode::InvalidInput, "HMatrix must be 3x3 or 4x4");
  HMatrix h;
  h.dim = dim;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      h.entries[i * dim + j] = 0.5 * (rowmajor[i * dim + j] + rowmajor[j * dim + i]);
  const auto s = trace_scalars(h.entries, dim);
  h.trace = s.tr;
  h.trace_sq = s.tr2;
  h.trace_cu = s.tr3;
  h.det = s.det;
  return h;
}

Result<OrthoBasis3> gram_schmidt3(std::span<const double> a, std::span<const double> b,
                                  std::span<const double> c) {
  if (a.size() != b.size() || a.size() != c.size() || a.size() < 3)
    throw Error(ErrorCode::InvalidInput, "gram_schmidt3: need three vectors of equal dimension >= 3");
  const std::array<std::span<const double>, 3> in{a, b, c};
  std::array<Vector, 3> q;
  for (int i = 0; i < 3; ++i) {
    Vector w(in[i].begin(), in[i].end());
    const double n_in = norm2(w);
    if (!(n_in > 0.0) || !std::isfinite(n_in)) return ErrorCode::LinearDependence;
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) axpy(-dot(q[j], w), q[j], w);
    const double n_w = norm2(w);
    if (!(n_w > kTolDep * n_in)) return ErrorCode::LinearDependence;
    for (double& x : w) x /= n_w;
    q[i] = std::move(w);
  }
  return OrthoBasis3{std::move(q[0]), std::move(q[1]), std::move(q[2])};
}

HMatrix project_hessian(std::span<const Vector> basis, const HessVec& hess_vec) {
  const int dim = static_cast<int>(basis.size());
  if (dim != 3 && dim != 4)
    throw Error(ErrorCode::InvalidInput, "project_hessian: basis must have 3 or 4 vectors");
  std::array<double, 16> m{};
  for (int j = 0; j < dim; ++j) {
    const Vector aq = hess_vec(basis[j]);
    for (int i = 0; i < dim; ++i) m[i * dim + j] = dot(basis[i], aq);
  }
  return HMatrix::from_entries(dim, std::span<const double>(m.data(), dim * dim));
}

HMatrix project_hessian(const OrthoBasis3& basis, const HessVec& hess_vec) {
  const std::array<Vector, 3> cols{basis.u, basis.v, basis.r};
  return project_hessian(std::span<const Vector>(cols), hess_vec);
}

Result<CubicSolve> largest_root_cubic(const HMatrix& h) {
  if (h.dim != 3) throw Error(ErrorCode::InvalidInput, "largest_root_cubic: dim must be 3");
  for (int i = 0; i < 9; ++i)
    if (!std::isfinite(h.entries[i])) return ErrorCode::NumericalFailure;

  const double mean = h.trace / 3.0;
  const auto b = shifted(h, mean);
  const auto bs = trace_scalars(b, 3);

  CubicSolve out;
  // With tr(B) = 0 the general expressions reduce to p = -tr(B^2)/2 and
  // q = -det(B).
  out.p = -0.5 * bs.tr2;
  out.q = -bs.det;
  if (std::abs(out.p) <= kTripleTol * std::max(1.0, h.trace_sq)) {
    out.triple_safeguard = true;
    out.theta = 0.0;
    out.largest_root = mean;
  } else {
    const double ap = std::abs(out.p);
    double arg = -0.5 * out.q * std::pow(3.0 / ap, 1.5);
    arg = std::clamp(arg, -1.0, 1.0);
    out.theta = std::acos(arg);
    out.largest_root = mean + 2.0 * std::cos(out.theta / 3.0) * std::sqrt(ap / 3.0);
  }

  const double z = out.largest_root;
  const double c1 = 0.5 * (h.trace * h.trace - h.trace_sq);
  const double residual = ((z - h.trace) * z + c1) * z - h.det;
  const double scale = std::max(1.0, std::pow(std::abs(h.trace), 3.0));
  if (!std::isfinite(z) || std::abs(residual) > 1e-9 * scale) return ErrorCode::NumericalFailure;
  return out;
}

Result<double> largest_root_quartic(const HMatrix& h) {
  if (h.dim != 4) throw Error(ErrorCode::InvalidInput, "largest_root_quartic: dim must be 4");
  for (double v : h.entries)
    if (!std::isfinite(v)) return ErrorCode::NumericalFailure;

  const double mean = h.trace / 4.0;
  const auto b = shifted(h, mean);
  const auto bs = trace_scalars(b, 4);
  // Characteristic quartic of the trace-free part: t^4 + c2 t^2 + c3 t + c4,
  // c2 = -tr(B^2)/2, c3 = -theta = -tr(B^3)/3, c4 = det(B).
  const double c2 = -0.5 * bs.tr2;
  const double c3 = -bs.tr3 / 3.0;
  const double c4 = bs.det;
  auto at_or_above_max_root = [&](double t) {
    const double p0 = ((t * t + c2) * t + c3) * t + c4;
    const double p1 = (4.0 * t * t + 2.0 * c2) * t + c3;
    const double p2 = 12.0 * t * t + 2.0 * c2;
    return p0 >= 0.0 && p1 >= 0.0 && p2 >= 0.0 && t >= 0.0;
  };

  double lo = b[0];
  double hi = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    double radius = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) radius += std::abs(b[i * 4 + j]);
      scale = std::max(scale, std::abs(b[i * 4 + j]));
    }
    lo = std::max(lo, b[i * 4 + i]);
    hi = std::max(hi, b[i * 4 + i] + radius);
  }
  if (!(hi > lo)) return mean + lo;
  // Rounding can leave the bracket test false at the Gershgorin edge.
  for (int widen = 0; widen < 8 && !at_or_above_max_root(hi); ++widen)
    hi += (hi - lo) + scale;
  if (!at_or_above_max_root(hi)) return ErrorCode::NumericalFailure;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 200; ++it) {
    if (hi - lo <= 4.0 * eps * std::max({std::abs(lo), std::abs(hi), scale}))
      return mean + 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (at_or_above_max_root(mid))
      hi = mid;
    else
      lo = mid;
  }
  return ErrorCode::NumericalFailure;
}

Result<double> alpha_new_direct(const OrthoBasis3& basis, const HessVec& hess_vec) {
  const auto cubic = largest_root_cubic(project_hessian(basis, hess_vec));
  if (!cubic) return cubic.error();
  if (!(cubic->largest_root > 0.0)) return ErrorCode::Degenerate;
  return 1.0 / cubic->largest_root;
}

void GradientHistory::push(double gnorm_sq, std::optional<double> bb1,
                           std::optional<double> bb2) {
  ring_[count_ % kCapacity] = HistoryRecord{gnorm_sq, std::nullopt, bb1, bb2};
  ++count_;
}

void GradientHistory::set_step(double step) {
  if (count_ == 0) throw Error(ErrorCode::InvalidInput, "GradientHistory::set_step on empty history");
  ring_[(count_ - 1) % kCapacity].step = step;
}

const HistoryRecord& GradientHistory::at_lag(std::size_t lag) const {
  if (lag >= size()) throw Error(ErrorCode::InvalidInput, "GradientHistory: lag out of range");
  return ring_[(count_ - 1 - lag) % kCapacity];
}

Result<RecurrenceScalars> recurrence_scalars(const GradientHistory& hist) {
  if (hist.size() < 4) return ErrorCode::Degenerate;
  const auto& r0 = hist.at_lag(0);  // k
  const auto& r1 = hist.at_lag(1);  // k-1
  const auto& r2 = hist.at_lag(2);  // k-2
  const auto& r3 = hist.at_lag(3);  // k-3
  if (!r0.bb1 || !r1.bb1 || !r2.bb1 || !r2.step || !r3.step) return ErrorCode::Degenerate;

  const double a3 = *r3.step;
  const double a2 = *r2.step;
  const double bb1_km2 = *r2.bb1;
  const double bb1_km1 = *r1.bb1;
  const double bb1_k = *r0.bb1;
  const double n3 = r3.gnorm_sq;
  const double n2 = r2.gnorm_sq;
  const double n1 = r1.gnorm_sq;
  for (double v : {a3, a2, bb1_km2, bb1_km1, bb1_k, n3, n2, n1})
    if (!(v > 0.0) || !std::isfinite(v)) return ErrorCode::Degenerate;

  RecurrenceScalars s;
  const double overlap = 1.0 - a3 / bb1_km2;  // g_{k-2}'g_{k-3} / ||g_{k-3}||^2
  s.zeta = overlap * n3 / n2;
  if (!(std::abs(s.zeta) > kTolDep)) return ErrorCode::Degenerate;
  s.sigma = overlap * s.zeta;
  if (!(s.sigma < 1.0 - kTolDep)) return ErrorCode::Degenerate;
  s.delta = (1.0 - 1.0 / s.zeta) / a3;
  const double one_m_sigma = 1.0 - s.sigma;
  s.gamma = 1.0 - (a2 / one_m_sigma) * (1.0 / bb1_km1 - s.sigma * s.delta);
  const double shrink = 1.0 - a2 * s.delta;  // g_{k-1}'g_{k-3} / g_{k-2}'g_{k-3}
  s.g_r = n1 - (s.sigma * shrink * shrink + s.gamma * s.gamma * one_m_sigma) * n2;
  s.varsigma = ((s.gamma - shrink) / bb1_km2 - s.gamma / a2) * (1.0 - a2 / bb1_km1) -
               (s.gamma - shrink) / a3 * s.gamma * one_m_sigma;
  s.g_Ar = (1.0 / bb1_k + s.gamma / a2) * n1 + s.varsigma * n2;

  for (double v : {s.zeta, s.sigma, s.delta, s.gamma, s.g_r, s.varsigma, s.g_Ar})
    if (!std::isfinite(v)) return ErrorCode::Degenerate;
  return s;
}

Result<HMatrix> hmatrix_from_recurrence(const RecurrenceScalars& scal,
                                        const GradientHistory& hist) {
  if (!(scal.g_r > 0.0)) return ErrorCode::Degenerate;
  if (hist.size() < 4) return ErrorCode::Degenerate;
  const auto& r1 = hist.at_lag(1);
  const auto& r2 = hist.at_lag(2);
  const auto& r3 = hist.at_lag(3);
  if (!r1.bb1 || !r2.bb1 || !r2.step || !r3.step) return ErrorCode::Degenerate;

  const double a3 = *r3.step;
  const double a2 = *r2.step;
  const double bb1_km2 = *r2.bb1;
  const double bb1_km1 = *r1.bb1;
  const double g3 = std::sqrt(r3.gnorm_sq);
  const double g2 = std::sqrt(r2.gnorm_sq);
  const double one_m_sigma = 1.0 - scal.sigma;
  if (!(one_m_sigma > 0.0)) return ErrorCode::Degenerate;

  const double h11 = 1.0 / bb1_km2;
  const double h12 = -std::sqrt(one_m_sigma) * g2 / (a3 * g3);
  const double h22 = (1.0 / bb1_km1 - 2.0 * scal.sigma * scal.delta + scal.sigma / bb1_km2) /
                     one_m_sigma;
  const double h23 = -std::sqrt(scal.g_r) / (a2 * g2 * std::sqrt(one_m_sigma));
  const double h33 = scal.g_Ar / scal.g_r + scal.gamma / a2;

  const std::array<double, 9> m{h11, h12, 0.0, h12, h22, h23, 0.0, h23, h33};
  for (double v : m)
    if (!std::isfinite(v)) return ErrorCode::Degenerate;
  return HMatrix::from_entries(3, m);
}

Result<double> alpha_new_bb(const GradientHistory& hist) {
  const auto scal = recurrence_scalars(hist);
  if (!scal) return scal.error();
  const auto h = hmatrix_from_recurrence(*scal, hist);
  if (!h) return h.error();
  const auto cubic = largest_root_cubic(*h);
  if (!cubic) return ErrorCode::Degenerate;
  if (!(cubic->largest_root > 0.0)) return ErrorCode::Degenerate;
  const double alpha = 1.0 / cubic->largest_root;
  if (!std::isfinite(alpha)) return ErrorCode::Degenerate;
  return alpha;
}

}  // namespace qterm
