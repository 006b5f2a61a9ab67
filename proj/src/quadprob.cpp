#include "qterm/quadprob.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qterm/result.hpp"
#include "qterm/rng.hpp"

namespace qterm {

const char* to_string(QuadForm form) noexcept {
  return form == QuadForm::TestQp ? "TESTQP" : "HALFFORM";
}

double QuadraticProblem::value(std::span<const double> x) const {
  double acc = 0.0;
  if (form == QuadForm::TestQp) {
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      const double d = x[i] - x_star[i];
      acc += spectrum[i] * d * d;
    }
    return acc;
  }
  for (std::size_t i = 0; i < spectrum.size(); ++i) acc += spectrum[i] * x[i] * x[i];
  return 0.5 * acc;
}

void QuadraticProblem::gradient(std::span<const double> x, std::span<double> g) const {
  if (form == QuadForm::TestQp) {
    for (std::size_t i = 0; i < spectrum.size(); ++i) g[i] = 2.0 * spectrum[i] * (x[i] - x_star[i]);
  } else {
    for (std::size_t i = 0; i < spectrum.size(); ++i) g[i] = spectrum[i] * x[i];
  }
}

Vector QuadraticProblem::gradient(std::span<const double> x) const {
  Vector g(spectrum.size());
  gradient(x, g);
  return g;
}

Vector QuadraticProblem::hess_vec(std::span<const double> d) const {
  const double c = hessian_scale();
  Vector out(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) out[i] = c * spectrum[i] * d[i];
  return out;
}

double QuadraticProblem::lambda_min() const {
  return hessian_scale() * *std::min_element(spectrum.begin(), spectrum.end());
}

double QuadraticProblem::lambda_max() const {
  return hessian_scale() * *std::max_element(spectrum.begin(), spectrum.end());
}

namespace {

void finish(QuadraticProblem& p) {
  const auto [lo, hi] = std::minmax_element(p.spectrum.begin(), p.spectrum.end());
  p.kappa = *hi / *lo;
}

}  // namespace

QuadraticProblem generate(int set_id, std::size_t n, double kappa, std::uint64_t seed) {
  if (set_id < 1 || set_id > 5)
    throw Error(ErrorCode::InvalidSpec, "problem set must be in 1..5");
  if (n < 3) throw Error(ErrorCode::InvalidSpec, "problem dimension must be >= 3");
  if (!(kappa > 1.0) || !std::isfinite(kappa))
    throw Error(ErrorCode::InvalidSpec, "kappa must be finite and > 1");
  if (set_id == 2 && n % 2 != 0) throw Error(ErrorCode::InvalidSpec, "set 2 needs even n");
  if ((set_id == 3 || set_id == 5) && n % 5 != 0)
    throw Error(ErrorCode::InvalidSpec, "sets 3 and 5 need n divisible by 5");

  QuadraticProblem p;
  p.set_id = set_id;
  p.form = QuadForm::TestQp;
  p.requested_kappa = kappa;
  p.seed = seed;
  p.spectrum.assign(n, 0.0);
  auto& v = p.spectrum;

  Rng rng(seed, kStreamSpectrum);
  // 1-based index j maps to v[j - 1].
  switch (set_id) {
    case 1:
      v.front() = 1.0;
      v.back() = kappa;
      for (std::size_t j = 2; j <= n - 1; ++j) v[j - 1] = rng.open(1.0, kappa);
      break;
    case 2:
      for (std::size_t j = 1; j <= n; ++j) {
        const double s = j <= n / 2 ? rng.open(0.8, 1.0) : rng.open(0.0, 0.2);
        v[j - 1] = 1.0 + (kappa - 1.0) * s;
      }
      break;
    case 3:
      v.front() = 1.0;
      v.back() = kappa;
      for (std::size_t j = 2; j <= n / 5; ++j) v[j - 1] = rng.open(1.0, 100.0);
      for (std::size_t j = n / 5 + 1; j <= n - 1; ++j) v[j - 1] = rng.open(kappa / 2.0, kappa);
      break;
    case 4:
      for (std::size_t j = 1; j <= n; ++j)
        v[j - 1] = std::pow(kappa, static_cast<double>(n - j) / static_cast<double>(n - 1));
      break;
    case 5:
      v.front() = 1.0;
      v.back() = kappa;
      for (std::size_t j = 2; j <= 4 * n / 5; ++j) v[j - 1] = rng.open(1.0, 100.0);
      for (std::size_t j = 4 * n / 5 + 1; j <= n - 1; ++j) v[j - 1] = rng.open(kappa / 2.0, kappa);
      break;
  }

  Rng xrng(seed, kStreamMinimizer);
  p.x_star.resize(n);
  for (double& x : p.x_star) x = xrng.closed(-10.0, 10.0);
  finish(p);
  return p;
}

QuadraticProblem verification_problem(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw Error(ErrorCode::InvalidSpec, "kappa must be positive and finite");
  QuadraticProblem p;
  p.set_id = 0;
  p.form = QuadForm::HalfForm;
  p.spectrum = {1.0, kappa / 2.0, kappa};
  p.x_star = {0.0, 0.0, 0.0};
  p.requested_kappa = kappa;
  finish(p);
  return p;
}

Vector random_start(std::size_t n, std::uint64_t seed, std::uint64_t replicate) {
  Rng rng(seed, kStreamStartBase + replicate);
  Vector x(n);
  for (double& v : x) v = rng.closed(-10.0, 10.0);
  return x;
}

void write_problem(std::ostream& os, const QuadraticProblem& p) {
  char buf[64];
  os << "set,n,kappa,seed,form\n";
  std::snprintf(buf, sizeof buf, "%.17g", p.requested_kappa);
  os << p.set_id << ',' << p.dimension() << ',' << buf << ',' << p.seed << ','
     << to_string(p.form) << '\n';
  for (double v : p.spectrum) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << '\n';
  }
}

QuadraticProblem read_problem(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "set,n,kappa,seed,form")
    throw Error(ErrorCode::InvalidInput, "problem file: missing header");
  if (!std::getline(is, line)) throw Error(ErrorCode::InvalidInput, "problem file: missing fields");
  std::stringstream fields(line);
  std::string set_s, n_s, kappa_s, seed_s, form_s;
  std::getline(fields, set_s, ',');
  std::getline(fields, n_s, ',');
  std::getline(fields, kappa_s, ',');
  std::getline(fields, seed_s, ',');
  std::getline(fields, form_s, ',');

  QuadraticProblem p;
  try {
    p.set_id = std::stoi(set_s);
    const std::size_t n = std::stoul(n_s);
    p.requested_kappa = std::stod(kappa_s);
    p.seed = std::stoull(seed_s);
    if (form_s == "TESTQP")
      p.form = QuadForm::TestQp;
    else if (form_s == "HALFFORM")
      p.form = QuadForm::HalfForm;
    else
      throw Error(ErrorCode::InvalidInput, "problem file: unknown form " + form_s);
    p.spectrum.reserve(n);
    while (p.spectrum.size() < n && std::getline(is, line)) p.spectrum.push_back(std::stod(line));
    if (p.spectrum.size() != n) throw Error(ErrorCode::InvalidInput, "problem file: short spectrum");
    for (double v : p.spectrum)
      if (!(v > 0.0)) throw Error(ErrorCode::InvalidInput, "problem file: nonpositive spectrum value");
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidInput, "problem file: malformed number");
  }

  if (p.set_id >= 1 && p.set_id <= 5) {
    Rng xrng(p.seed, kStreamMinimizer);
    p.x_star.resize(p.spectrum.size());
    for (double& x : p.x_star) x = xrng.closed(-10.0, 10.0);
  } else {
    p.x_star.assign(p.spectrum.size(), 0.0);
  }
  finish(p);
  return p;
}

}  // namespace qterm
