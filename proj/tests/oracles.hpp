#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature or root finding.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "vexp/cube_family.hpp"

namespace oracle {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, long n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Plain bisection on a sign change of g in [lo, hi].
inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-15) {
  double glo = g(lo);
  if (glo * g(hi) > 0) throw std::runtime_error("oracle bracket has no sign change");
  for (int i = 0; i < 400 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// integral over [c-h, c+h] of |x|^a for a > -1, by antiderivative.
inline double power_integral_1d(double a, double c, double h) {
  const auto prim = [a](double x) {
    const double v = std::pow(std::abs(x), a + 1.0) / (a + 1.0);
    return x < 0 ? -v : v;
  };
  return prim(c + h) - prim(c - h);
}

// integral over [-1,1]^2 of |x|^-a for a < 2, in polar form.
inline double square_power_integral(double a) {
  const double inner = simpson([a](double t) { return std::pow(std::cos(t), a - 2.0); }, 0.0,
                               std::numbers::pi / 4, 200000);
  return 8.0 / (2.0 - a) * inner;
}

// Luxemburg norm of |x|^a on [c-h, c+h] for a constant exponent p.
inline double power_norm_1d(double a, double p, double c, double h) {
  return std::pow(power_integral_1d(a * p, c, h), 1.0 / p);
}

// Small generator helpers for property tests.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return rng.uniform(lo, hi); }
  int below(int n) { return static_cast<int>(rng.below(static_cast<std::uint64_t>(n))); }
  vexp::Rng rng;
};

}  // namespace oracle
