#pragma once

#include <string>
#include <vector>

#include "vexp/varnorm.hpp"

namespace vexp {

// A positive scalar weight. Closed-form weights are c * prod_k |x - x_k|^{a_k};
// that set is closed under products, powers and inverses. Other weights wrap
// an arbitrary function with declared singular points.
class Weight {
 public:
  struct PowerFactor {
    Point center{};
    double exponent = 0.0;
  };

  static Weight constant(double c);
  // scale * |x - center|^a
  static Weight power(double a, const Point& center = Point{}, double scale = 1.0);
  static Weight product(const Weight& a, const Weight& b);
  static Weight custom(ScalarFn f, std::vector<Point> singular_points, std::string label);

  double operator()(const Point& x) const;

  Weight inverse() const { return pow(-1.0); }
  Weight pow(double t) const;
  Weight scaled(double c) const;

  ScalarField field() const;
  std::vector<Point> singular_points() const;
  bool closed_form() const { return !custom_; }
  double coefficient() const { return coef_; }
  const std::vector<PowerFactor>& factors() const { return factors_; }
  std::string label() const;

 private:
  double coef_ = 1.0;
  std::vector<PowerFactor> factors_;
  // Custom weights: value = coef_ * custom_(x)^custom_power_.
  ScalarFn custom_;
  double custom_power_ = 1.0;
  std::vector<Point> custom_singular_;
  std::string custom_label_;
};

}  // namespace vexp
