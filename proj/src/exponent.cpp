#include "vexp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string Cube::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "Q(";
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << center_[i];
  os << "; " << side_ << ")";
  return os.str();
}

Cube special_cube(int dim, int k) {
  if (k < 0) throw InvalidInput("special cube index must be non-negative");
  return Cube(dim, Point{}, 2.0 * std::exp(static_cast<double>(k) + 1.0));
}

ExponentFunction::ExponentFunction(Eval eval, ExponentBounds bounds,
                                   std::vector<Point> breakpoints, std::string label) {
  if (!(bounds.p_minus >= 1.0))
    throw InvalidInput("exponent p_minus must be >= 1, got " + fmt(bounds.p_minus));
  if (!std::isfinite(bounds.p_plus))
    throw InvalidInput("exponent p_plus must be finite (Omega_infinity is not supported)");
  if (bounds.p_minus > bounds.p_plus)
    throw InvalidInput("exponent p_minus exceeds p_plus");
  auto impl = std::make_shared<Impl>();
  impl->eval = std::move(eval);
  impl->bounds = bounds;
  impl->breakpoints = std::move(breakpoints);
  impl->label = std::move(label);
  impl_ = std::move(impl);
}

ExponentFunction ExponentFunction::constant(double p0) {
  return ExponentFunction([p0](const Point&) { return p0; }, {p0, p0, p0, 0.0, 0.0}, {},
                          "constant(" + fmt(p0) + ")");
}

ExponentFunction ExponentFunction::piecewise(int axis, double threshold, double below,
                                             double above) {
  if (axis < 0 || axis >= kMaxDim) throw InvalidInput("piecewise exponent axis out of range");
  Point bp{};
  bp[axis] = threshold;
  const double lo = std::min(below, above), hi = std::max(below, above);
  // Far from the threshold the exponent is `above` on one side and `below` on
  // the other, so LH_infty holds only when the two values agree.
  const double pinf = 0.5 * (below + above);
  const double cinf = below == above ? 0.0 : kInf;
  const double c0 = below == above ? 0.0 : kInf;
  return ExponentFunction(
      [=](const Point& x) { return x[axis] < threshold ? below : above; },
      {lo, hi, pinf, c0, cinf}, {bp},
      "piecewise(x" + std::to_string(axis) + "<" + fmt(threshold) + ":" + fmt(below) + "," +
          fmt(above) + ")");
}

ExponentFunction ExponentFunction::log_decay(double base, double amplitude) {
  const double lo = std::min(base, base + amplitude);
  const double hi = std::max(base, base + amplitude);
  // |d/dr 1/log(e+r)| <= 1/e and t(-log t) <= 1/e on (0, 1/2), so C_0 = |b|/e^2.
  const double c0 = std::abs(amplitude) / (std::numbers::e * std::numbers::e);
  return ExponentFunction(
      [=](const Point& x) { return base + amplitude / std::log(std::numbers::e + norm(x)); },
      {lo, hi, base, c0, std::abs(amplitude)}, {},
      "log_decay(" + fmt(base) + "," + fmt(amplitude) + ")");
}

ExponentFunction ExponentFunction::conjugate() const {
  if (impl_->conjugate_of) return ExponentFunction(impl_->conjugate_of);
  const auto& b = impl_->bounds;
  ExponentBounds cb;
  cb.p_minus = conjugate_exponent(b.p_plus);
  cb.p_plus = conjugate_exponent(b.p_minus);
  cb.p_infty = conjugate_exponent(b.p_infty);
  // |p'(x) - p'(y)| = |p(x) - p(y)| / ((p(x)-1)(p(y)-1)).
  const double gap = b.p_minus - 1.0;
  cb.lh0 = b.lh0 == 0.0 ? 0.0 : (gap > 0.0 ? b.lh0 / (gap * gap) : kInf);
  const double gap_inf = b.p_infty - 1.0;
  cb.lhinf = b.lhinf == 0.0 ? 0.0 : (gap > 0.0 && gap_inf > 0.0 ? b.lhinf / (gap * gap_inf) : kInf);

  auto impl = std::make_shared<Impl>();
  auto base = impl_;
  impl->eval = [base](const Point& x) { return conjugate_exponent(base->eval(x)); };
  impl->bounds = cb;
  impl->breakpoints = b.p_minus == b.p_plus ? std::vector<Point>{} : impl_->breakpoints;
  impl->label = "conj(" + impl_->label + ")";
  impl->conjugate_of = impl_;
  return ExponentFunction(std::shared_ptr<const Impl>(std::move(impl)));
}

ExponentFunction ExponentFunction::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("exponent scale must be positive");
  if (s == 1.0) return *this;
  const auto& b = impl_->bounds;
  if (!std::isfinite(b.p_plus))
    throw UnboundedConjugate("cannot scale an exponent with p_plus = inf");
  auto base = impl_;
  return ExponentFunction([base, s](const Point& x) { return s * base->eval(x); },
                          {s * b.p_minus, s * b.p_plus, s * b.p_infty, s * b.lh0, s * b.lhinf},
                          impl_->breakpoints, fmt(s) + "*" + impl_->label);
}

ExponentFunction ExponentFunction::left_scaled(double s) const {
  if (!(s >= 1.0)) throw InvalidInput("left-openness scale must be >= 1");
  if (!(p_minus() > 1.0))
    throw UnboundedConjugate("left-openness requires p_minus > 1 (conjugate unbounded)");
  if (s == 1.0) return *this;
  return conjugate().scaled(s).conjugate();
}

ExponentFunction defect_exponent(const ExponentFunction& p, double s, double r) {
  if (!(s >= 1.0 && s < r)) throw InvalidInput("defect exponent requires 1 <= s < r");
  return p.scaled(r * s / (r - s));
}

double diening_constant(const ExponentFunction& p, int n) {
  // Pure formula; not limited to the dimensions the quadrature supports.
  if (n < 1) throw InvalidInput("dimension must be >= 1");
  if (!p.bounded()) throw UnboundedConjugate("Diening constant requires p_plus < inf");
  const double root_n = std::sqrt(static_cast<double>(n));
  const double spread = p.p_plus() - p.p_minus();
  const double geometric = spread == 0.0 ? 1.0 : std::pow(2.0 * root_n, n * spread);
  const double local = p.lh0() == 0.0 ? 1.0 : std::exp(p.lh0() * (1.0 + std::log2(root_n)));
  return std::max(geometric, local);
}

LHEstimate estimate_lh_constants(const ExponentFunction& p, const std::vector<Point>& grid) {
  if (grid.empty()) throw InvalidInput("log-Holder estimate needs a non-empty grid");
  LHEstimate out;
  std::vector<double> values(grid.size());
  std::vector<double> inv_log(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = p(grid[i]);
    inv_log[i] = 1.0 / std::log(std::numbers::e + norm(grid[i]));
  }

  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double d = distance(grid[i], grid[j]);
      if (d > 0.0 && d < 0.5)
        out.lh0 = std::max(out.lh0, std::abs(values[i] - values[j]) * -std::log(d));
    }

  // Two outermost points (smallest 1/log(e+|x|)) with distinct abscissae.
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return inv_log[a] < inv_log[b]; });
  const std::size_t a = order[0];
  std::size_t b = a;
  for (std::size_t k = 1; k < order.size(); ++k)
    if (inv_log[order[k]] > inv_log[a] * (1.0 + 1e-9)) {
      b = order[k];
      break;
    }
  if (b == a) {
    out.p_infty = values[a];
  } else {
    const double slope = (values[b] - values[a]) / (inv_log[b] - inv_log[a]);
    out.p_infty = values[a] - slope * inv_log[a];
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    out.lhinf = std::max(out.lhinf, std::abs(values[i] - out.p_infty) / inv_log[i]);
  return out;
}

std::vector<std::string> validate_exponent(const ExponentFunction& p,
                                           const std::vector<Point>& grid, double slack) {
  std::vector<std::string> issues;
  const auto& b = p.bounds();
  for (const auto& x : grid) {
    const double v = p(x);
    if (v < b.p_minus - slack || v > b.p_plus + slack)
      issues.push_back("p(x) = " + fmt(v) + " outside [p_minus, p_plus]");
    if (std::isfinite(b.lhinf) &&
        std::abs(v - b.p_infty) > b.lhinf / std::log(std::numbers::e + norm(x)) + slack)
      issues.push_back("LH_infty violated at |x| = " + fmt(norm(x)));
  }
  if (std::isfinite(b.lh0)) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        const double d = distance(grid[i], grid[j]);
        if (d > 0.0 && d < 0.5 &&
            std::abs(p(grid[i]) - p(grid[j])) > b.lh0 / -std::log(d) + slack)
          issues.push_back("LH_0 violated at distance " + fmt(d));
      }
  }
  return issues;
}

}  // namespace vexp
