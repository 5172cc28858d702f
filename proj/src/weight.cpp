#include "vexp/weight.hpp"

#include <cmath>
#include <sstream>

namespace vexp {

Weight Weight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("constant weight must be positive");
  Weight w;
  w.coef_ = c;
  return w;
}

Weight Weight::power(double a, const Point& center, double scale) {
  if (!std::isfinite(a)) throw InvalidInput("power weight exponent must be finite");
  Weight w = constant(scale);
  if (a != 0.0) w.factors_.push_back({center, a});
  return w;
}

Weight Weight::product(const Weight& a, const Weight& b) {
  if (a.custom_ || b.custom_) {
    Weight w = custom([a, b](const Point& x) { return a(x) * b(x); }, a.singular_points(),
                      "(" + a.label() + ")*(" + b.label() + ")");
    for (const auto& p : b.singular_points()) w.custom_singular_.push_back(p);
    return w;
  }
  Weight w = a;
  w.coef_ *= b.coef_;
  for (const auto& f : b.factors_) {
    bool merged = false;
    for (auto& g : w.factors_)
      if (g.center == f.center) {
        g.exponent += f.exponent;
        merged = true;
      }
    if (!merged) w.factors_.push_back(f);
  }
  return w;
}

Weight Weight::custom(ScalarFn f, std::vector<Point> singular_points, std::string label) {
  Weight w;
  w.custom_ = std::move(f);
  w.custom_singular_ = std::move(singular_points);
  w.custom_label_ = std::move(label);
  return w;
}

double Weight::operator()(const Point& x) const {
  double v = coef_;
  if (custom_) {
    const double c = custom_(x);
    v *= custom_power_ == 1.0 ? c : std::pow(c, custom_power_);
  }
  for (const auto& f : factors_) v *= std::pow(distance(x, f.center), f.exponent);
  return v;
}

Weight Weight::pow(double t) const {
  Weight w = *this;
  w.coef_ = std::pow(coef_, t);
  for (auto& f : w.factors_) f.exponent *= t;
  w.custom_power_ *= t;
  return w;
}

Weight Weight::scaled(double c) const {
  if (!(c > 0.0)) throw InvalidInput("weight scale must be positive");
  Weight w = *this;
  w.coef_ *= c;
  return w;
}

std::vector<Point> Weight::singular_points() const {
  std::vector<Point> out = custom_singular_;
  for (const auto& f : factors_) out.push_back(f.center);
  return out;
}

ScalarField Weight::field() const {
  Weight self = *this;
  return ScalarField{[self](const Point& x) { return self(x); }, singular_points(), {},
                     std::nullopt};
}

std::string Weight::label() const {
  std::ostringstream os;
  os.precision(10);
  os << coef_;
  if (custom_) os << "*" << custom_label_ << (custom_power_ != 1.0 ? "^" : "")
                  << (custom_power_ != 1.0 ? std::to_string(custom_power_) : "");
  for (const auto& f : factors_) os << "*|x-(" << f.center[0] << "," << f.center[1] << ","
                                    << f.center[2] << ")|^" << f.exponent;
  return os.str();
}

}  // namespace vexp
