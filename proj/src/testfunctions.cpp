#include <cmath>
#include <memory>
#include <numbers>

#include "qterm/objective.hpp"
#include "qterm/quadprob.hpp"
#include "qterm/result.hpp"

namespace qterm {

namespace {

using CSpan = std::span<const double>;
using MSpan = std::span<double>;

ObjectiveFn rosenbrock(std::size_t n) {
  ObjectiveFn f;
  f.name = n == 2 ? "rosenbrock" : "ext_rosenbrock_" + std::to_string(n);
  f.dimension = n;
  f.value = [](CSpan x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = 1.0 - x[i];
      acc += 100.0 * a * a + b * b;
    }
    return acc;
  };
  f.gradient = [](CSpan x, MSpan g) {
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) {
      const double a = x[i + 1] - x[i] * x[i];
      g[i] = -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
      g[i + 1] = 200.0 * a;
    }
  };
  f.start.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.start[i] = (i % 2 == 0) ? -1.2 : 1.0;
  return f;
}

ObjectiveFn powell_singular() {
  ObjectiveFn f;
  f.name = "powell_singular";
  f.dimension = 4;
  f.value = [](CSpan x) {
    const double a = x[0] + 10.0 * x[1];
    const double b = x[2] - x[3];
    const double c = x[1] - 2.0 * x[2];
    const double d = x[0] - x[3];
    return a * a + 5.0 * b * b + std::pow(c, 4) + 10.0 * std::pow(d, 4);
  };
  f.gradient = [](CSpan x, MSpan g) {
    const double a = x[0] + 10.0 * x[1];
    const double b = x[2] - x[3];
    const double c = x[1] - 2.0 * x[2];
    const double d = x[0] - x[3];
    g[0] = 2.0 * a + 40.0 * d * d * d;
    g[1] = 20.0 * a + 4.0 * c * c * c;
    g[2] = 10.0 * b - 8.0 * c * c * c;
    g[3] = -10.0 * b - 40.0 * d * d * d;
  };
  f.start = {3.0, -1.0, 0.0, 1.0};
  return f;
}

ObjectiveFn beale() {
  ObjectiveFn f;
  f.name = "beale";
  f.dimension = 2;
  static constexpr double kC[3] = {1.5, 2.25, 2.625};
  f.value = [](CSpan x) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double r = kC[i] - x[0] * (1.0 - std::pow(x[1], i + 1));
      acc += r * r;
    }
    return acc;
  };
  f.gradient = [](CSpan x, MSpan g) {
    g[0] = g[1] = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double p = std::pow(x[1], i + 1);
      const double r = kC[i] - x[0] * (1.0 - p);
      g[0] += 2.0 * r * -(1.0 - p);
      g[1] += 2.0 * r * x[0] * (i + 1) * std::pow(x[1], i);
    }
  };
  f.start = {1.0, 1.0};
  return f;
}

double helix_theta(double x1, double x2) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (x1 > 0.0) return std::atan(x2 / x1) / two_pi;
  if (x1 < 0.0) return std::atan(x2 / x1) / two_pi + 0.5;
  return x2 >= 0.0 ? 0.25 : -0.25;
}

ObjectiveFn helical_valley() {
  ObjectiveFn f;
  f.name = "helical_valley";
  f.dimension = 3;
  f.value = [](CSpan x) {
    const double a = x[2] - 10.0 * helix_theta(x[0], x[1]);
    const double b = std::hypot(x[0], x[1]) - 1.0;
    return 100.0 * (a * a + b * b) + x[2] * x[2];
  };
  f.gradient = [](CSpan x, MSpan g) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double r = std::sqrt(r2);
    const double a = x[2] - 10.0 * helix_theta(x[0], x[1]);
    const double b = r - 1.0;
    const double th1 = -x[1] / (two_pi * r2);
    const double th2 = x[0] / (two_pi * r2);
    g[0] = 200.0 * (a * -10.0 * th1 + b * x[0] / r);
    g[1] = 200.0 * (a * -10.0 * th2 + b * x[1] / r);
    g[2] = 200.0 * a + 2.0 * x[2];
  };
  f.start = {-1.0, 0.0, 0.0};
  return f;
}

ObjectiveFn wood() {
  ObjectiveFn f;
  f.name = "wood";
  f.dimension = 4;
  f.value = [](CSpan x) {
    const double a = x[0] * x[0] - x[1];
    const double c = x[2] * x[2] - x[3];
    return 100.0 * a * a + (x[0] - 1.0) * (x[0] - 1.0) + (x[2] - 1.0) * (x[2] - 1.0) +
           90.0 * c * c + 10.1 * ((x[1] - 1.0) * (x[1] - 1.0) + (x[3] - 1.0) * (x[3] - 1.0)) +
           19.8 * (x[1] - 1.0) * (x[3] - 1.0);
  };
  f.gradient = [](CSpan x, MSpan g) {
    const double a = x[0] * x[0] - x[1];
    const double c = x[2] * x[2] - x[3];
    g[0] = 400.0 * a * x[0] + 2.0 * (x[0] - 1.0);
    g[1] = -200.0 * a + 20.2 * (x[1] - 1.0) + 19.8 * (x[3] - 1.0);
    g[2] = 360.0 * c * x[2] + 2.0 * (x[2] - 1.0);
    g[3] = -180.0 * c + 20.2 * (x[3] - 1.0) + 19.8 * (x[1] - 1.0);
  };
  f.start = {-3.0, -1.0, -3.0, -1.0};
  return f;
}

ObjectiveFn trigonometric(std::size_t n) {
  ObjectiveFn f;
  f.name = "trigonometric_" + std::to_string(n);
  f.dimension = n;
  auto residuals = [](CSpan x, std::vector<double>& r) {
    const std::size_t m = x.size();
    double sum_cos = 0.0;
    for (double v : x) sum_cos += std::cos(v);
    r.resize(m);
    for (std::size_t i = 0; i < m; ++i)
      r[i] = static_cast<double>(m) - sum_cos + static_cast<double>(i + 1) * (1.0 - std::cos(x[i])) -
             std::sin(x[i]);
  };
  f.value = [residuals](CSpan x) {
    std::vector<double> r;
    residuals(x, r);
    double acc = 0.0;
    for (double v : r) acc += v * v;
    return acc;
  };
  f.gradient = [residuals](CSpan x, MSpan g) {
    std::vector<double> r;
    residuals(x, r);
    double sum_r = 0.0;
    for (double v : r) sum_r += v;
    for (std::size_t j = 0; j < x.size(); ++j)
      g[j] = 2.0 * (std::sin(x[j]) * sum_r +
                    r[j] * (static_cast<double>(j + 1) * std::sin(x[j]) - std::cos(x[j])));
  };
  f.start.assign(n, 1.0 / static_cast<double>(n));
  return f;
}

ObjectiveFn broyden_tridiagonal(std::size_t n) {
  ObjectiveFn f;
  f.name = "broyden_tridiagonal_" + std::to_string(n);
  f.dimension = n;
  auto residual = [](CSpan x, std::size_t i) {
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < x.size() ? x[i + 1] : 0.0;
    return (3.0 - 2.0 * x[i]) * x[i] - left - 2.0 * right + 1.0;
  };
  f.value = [residual](CSpan x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = residual(x, i);
      acc += r * r;
    }
    return acc;
  };
  f.gradient = [residual](CSpan x, MSpan g) {
    const std::size_t m = x.size();
    for (std::size_t j = 0; j < m; ++j) {
      double acc = residual(x, j) * (3.0 - 4.0 * x[j]);
      if (j + 1 < m) acc -= residual(x, j + 1);
      if (j > 0) acc -= 2.0 * residual(x, j - 1);
      g[j] = 2.0 * acc;
    }
  };
  f.start.assign(n, -1.0);
  return f;
}

ObjectiveFn dixon_price(std::size_t n) {
  ObjectiveFn f;
  f.name = "dixon_price_" + std::to_string(n);
  f.dimension = n;
  f.value = [](CSpan x) {
    double acc = (x[0] - 1.0) * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double t = 2.0 * x[i] * x[i] - x[i - 1];
      acc += static_cast<double>(i + 1) * t * t;
    }
    return acc;
  };
  f.gradient = [](CSpan x, MSpan g) {
    const std::size_t m = x.size();
    for (std::size_t j = 0; j < m; ++j) g[j] = 0.0;
    g[0] = 2.0 * (x[0] - 1.0);
    for (std::size_t i = 1; i < m; ++i) {
      const double w = static_cast<double>(i + 1);
      const double t = 2.0 * x[i] * x[i] - x[i - 1];
      g[i] += w * 2.0 * t * 4.0 * x[i];
      g[i - 1] -= w * 2.0 * t;
    }
  };
  f.start.assign(n, 1.0);
  return f;
}

ObjectiveFn sphere(std::size_t n) {
  ObjectiveFn f;
  f.name = "sphere_" + std::to_string(n);
  f.dimension = n;
  f.value = [](CSpan x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
  };
  f.gradient = [](CSpan x, MSpan g) {
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
  };
  f.start.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.start[i] = static_cast<double>(i + 1);
  return f;
}

ObjectiveFn diagonal_quadratic() {
  // Set 4 spectrum, n = 100, kappa = 1e3.
  auto p = std::make_shared<QuadraticProblem>(generate(4, 100, 1e3, 1));
  ObjectiveFn f;
  f.name = "quad_set4_n100_k1e3";
  f.dimension = p->dimension();
  f.value = [p](CSpan x) { return p->value(x); };
  f.gradient = [p](CSpan x, MSpan g) { p->gradient(x, g); };
  f.start = random_start(p->dimension(), p->seed, 0);
  return f;
}

}  // namespace

std::vector<ObjectiveFn> builtin_suite() {
  return {rosenbrock(2),        rosenbrock(100),         powell_singular(),
          beale(),              helical_valley(),        wood(),
          trigonometric(10),    broyden_tridiagonal(10), dixon_price(10),
          sphere(10),           diagonal_quadratic()};
}

ObjectiveFn builtin_by_name(const std::string& name) {
  for (auto& f : builtin_suite())
    if (f.name == name) return f;
  throw Error(ErrorCode::InvalidSpec, "unknown builtin function: " + name);
}

}  // namespace qterm
