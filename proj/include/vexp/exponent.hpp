#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "vexp/geometry.hpp"

namespace vexp {

// Declared metadata of an exponent function. These are inputs, validated by
// sampling; they are never inferred as ground truth from point evaluations.
struct ExponentBounds {
  double p_minus = 1.0;
  double p_plus = 1.0;
  double p_infty = 1.0;
  double lh0 = 0.0;    // C_0
  double lhinf = 0.0;  // C_infty
};

// An exponent p(.) : R^n -> [1, inf). Immutable and cheap to copy.
//
// Conjugation is structural: conjugate().conjugate() hands back the original
// object, so the involution is exact rather than merely accurate.
class ExponentFunction {
 public:
  using Eval = std::function<double(const Point&)>;

  // Rejects p_minus < 1, p_plus = inf, or p_minus > p_plus.
  ExponentFunction(Eval eval, ExponentBounds bounds, std::vector<Point> breakpoints = {},
                   std::string label = "custom");

  static ExponentFunction constant(double p0);
  // p(x) = below for x[axis] < threshold, above otherwise.
  static ExponentFunction piecewise(int axis, double threshold, double below, double above);
  // p(x) = base + amplitude / log(e + |x|).
  static ExponentFunction log_decay(double base, double amplitude);

  double operator()(const Point& x) const { return impl_->eval(x); }

  const ExponentBounds& bounds() const { return impl_->bounds; }
  double p_minus() const { return impl_->bounds.p_minus; }
  double p_plus() const { return impl_->bounds.p_plus; }
  double p_infty() const { return impl_->bounds.p_infty; }
  double lh0() const { return impl_->bounds.lh0; }
  double lhinf() const { return impl_->bounds.lhinf; }
  bool bounded() const { return std::isfinite(impl_->bounds.p_plus); }
  bool is_constant() const { return impl_->bounds.p_minus == impl_->bounds.p_plus; }

  // Points where p may jump; quadrature splits cubes through them.
  const std::vector<Point>& breakpoints() const { return impl_->breakpoints; }
  const std::string& label() const { return impl_->label; }

  // Pointwise conjugate 1/p + 1/p' = 1. When p_minus = 1 the result has
  // p_plus = inf; norm computations on it raise UnboundedConjugate.
  ExponentFunction conjugate() const;

  // s * p(.)
  ExponentFunction scaled(double s) const;

  // q(.) with q'(.) = s p'(.), i.e. the exponent of the left-openness sweep.
  ExponentFunction left_scaled(double s) const;

  bool same_as(const ExponentFunction& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    Eval eval;
    ExponentBounds bounds;
    std::vector<Point> breakpoints;
    std::string label;
    std::shared_ptr<const Impl> conjugate_of;
  };
  explicit ExponentFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

inline double conjugate_exponent(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

// Exponent v(.) with 1/u = 1/(r p) + 1/v for u = s p, 1 <= s < r.
ExponentFunction defect_exponent(const ExponentFunction& p, double s, double r);

// C_D = max{(2 sqrt n)^{n (p_+ - p_-)}, exp(C_0 (1 + log2 sqrt n))}.
double diening_constant(const ExponentFunction& p, int n);

struct LHEstimate {
  double lh0 = 0.0;
  double lhinf = 0.0;
  double p_infty = 0.0;
};

// Smallest constants making both log-Holder inequalities hold over the grid.
// p_infty is extrapolated linearly in 1/log(e+|x|) from the two outermost
// grid points, then C_infty is the grid sup of |p(x) - p_infty| log(e+|x|).
LHEstimate estimate_lh_constants(const ExponentFunction& p, const std::vector<Point>& grid);

// Sampled check of the declared metadata. Returns human-readable violations.
std::vector<std::string> validate_exponent(const ExponentFunction& p,
                                           const std::vector<Point>& grid,
                                           double slack = 1e-12);

}  // namespace vexp
