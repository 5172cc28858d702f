#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "vexp/errors.hpp"

namespace vexp {

inline constexpr int kMaxDim = 3;

// Points live in R^n with n <= kMaxDim; unused trailing coordinates are zero,
// so Euclidean quantities computed over all kMaxDim slots are correct.
using Point = std::array<double, kMaxDim>;

inline double norm(const Point& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return std::sqrt(s);
}

inline double distance(const Point& x, const Point& y) {
  double s = 0.0;
  for (int i = 0; i < kMaxDim; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

inline void check_dimension(int n) {
  if (n < 1 || n > kMaxDim)
    throw InvalidInput("dimension must be in [1, " + std::to_string(kMaxDim) + "], got " +
                       std::to_string(n));
}

// Axis-parallel box [lo, hi] in R^n. Internal currency of the quadrature.
struct Box {
  int dim = 1;
  Point lo{};
  Point hi{};

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
  }
  bool contains(const Point& x, double slack = 0.0) const {
    for (int i = 0; i < dim; ++i)
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
  }
};

// Axis-parallel cube Q(center, side).
class Cube {
 public:
  Cube() = default;
  Cube(int dim, const Point& center, double side) : dim_(dim), center_(center), side_(side) {
    check_dimension(dim);
    if (!(side > 0.0) || !std::isfinite(side))
      throw InvalidInput("cube side must be positive and finite");
    for (int i = dim; i < kMaxDim; ++i) center_[i] = 0.0;
  }

  int dim() const { return dim_; }
  const Point& center() const { return center_; }
  double side() const { return side_; }
  double measure() const { return std::pow(side_, dim_); }

  Cube dilate(double k) const { return Cube(dim_, center_, k * side_); }

  Box box() const {
    Box b;
    b.dim = dim_;
    for (int i = 0; i < dim_; ++i) {
      b.lo[i] = center_[i] - 0.5 * side_;
      b.hi[i] = center_[i] + 0.5 * side_;
    }
    return b;
  }

  bool contains(const Point& x) const { return box().contains(x); }

  // True when `other` lies inside this cube (closed containment).
  bool contains(const Cube& other) const {
    const Box a = box(), b = other.box();
    const double slack = 1e-12 * side_;
    for (int i = 0; i < dim_; ++i)
      if (b.lo[i] < a.lo[i] - slack || b.hi[i] > a.hi[i] + slack) return false;
    return true;
  }

  // The 2^n dyadic children, in lexicographic corner order.
  std::vector<Cube> children() const {
    std::vector<Cube> out;
    const double h = 0.5 * side_;
    for (int mask = 0; mask < (1 << dim_); ++mask) {
      Point c = center_;
      for (int i = 0; i < dim_; ++i) c[i] += ((mask >> i) & 1 ? 0.25 : -0.25) * side_;
      out.emplace_back(dim_, c, h);
    }
    return out;
  }

  std::string describe() const;

 private:
  int dim_ = 1;
  Point center_{};
  double side_ = 1.0;
};

// Q_k = Q(0, 2 e^{k+1}); Q_0 = Q(0, 2e).
Cube special_cube(int dim, int k);

}  // namespace vexp
