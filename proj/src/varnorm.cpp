#include "vexp/varnorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Point> merged(std::vector<Point> a, const std::vector<Point>& b) {
  for (const auto& p : b)
    if (std::find(a.begin(), a.end(), p) == a.end()) a.push_back(p);
  return a;
}

std::vector<Point> corners(const Cube& q) {
  const Box b = q.box();
  return {b.lo, b.hi};
}

}  // namespace

ScalarField ScalarField::constant(double c) {
  return ScalarField{[c](const Point&) { return c; }, {}, {}, std::nullopt};
}

ScalarField ScalarField::indicator(const Cube& q) {
  return ScalarField{[q](const Point& x) { return q.contains(x) ? 1.0 : 0.0; }, {}, corners(q), q};
}

ScalarField ScalarField::indicator_union(const std::vector<Cube>& cubes) {
  if (cubes.empty()) throw InvalidInput("indicator of an empty union");
  std::vector<Point> splits;
  for (const auto& q : cubes) splits = merged(splits, corners(q));
  return ScalarField{[cubes](const Point& x) {
                       for (const auto& q : cubes)
                         if (q.contains(x)) return 1.0;
                       return 0.0;
                     },
                     {}, splits, std::nullopt};
}

ScalarField ScalarField::times(const ScalarField& other) const {
  auto a = eval, b = other.eval;
  return ScalarField{[a, b](const Point& x) {
                       const double u = a(x);
                       return u == 0.0 ? 0.0 : u * b(x);
                     },
                     merged(singular_points, other.singular_points),
                     merged(split_points, other.split_points),
                     support ? support : other.support};
}

ScalarField ScalarField::scaled(double c) const {
  auto a = eval;
  return ScalarField{[a, c](const Point& x) { return c * a(x); }, singular_points, split_points,
                     support};
}

ScalarField ScalarField::abs_pow(double e) const {
  auto a = eval;
  return ScalarField{[a, e](const Point& x) {
                       const double u = std::abs(a(x));
                       return u == 0.0 ? (e > 0.0 ? 0.0 : kInf) : std::pow(u, e);
                     },
                     singular_points, split_points, support};
}

ScalarField ScalarField::restricted(const Cube& q) const {
  auto a = eval;
  return ScalarField{[a, q](const Point& x) { return q.contains(x) ? a(x) : 0.0; },
                     singular_points, merged(split_points, corners(q)), q};
}

ModularCurve::ModularCurve(const ScalarField& f, const ExponentFunction& p, const Cube& domain,
                           const IntegrationPlan& plan) {
  if (!p.bounded())
    throw UnboundedConjugate("modular needs a bounded exponent (p_plus = inf): " + p.label());
  IntegrationPlan ip = plan.with_singularities(f.singular_points)
                           .with_splits(f.split_points)
                           .with_splits(p.breakpoints());
  if (f.support) ip = ip.with_splits(corners(*f.support));
  const auto probe = [&f, &p](const Point& x) {
    const double a = std::abs(f(x));
    return a == 0.0 ? 0.0 : std::pow(a, p(x));
  };
  RuleBuild rb = build_rule(probe, domain.box(), ip);
  if (!rb.converged)
    throw QuadratureFailure("modular quadrature did not converge on " + domain.describe(),
                            rb.previous_estimate, rb.last_estimate);
  rule_ = std::move(rb.rule);
  rho_ = rb.probe.finite ? rb.probe.value : kInf;

  log_a_.resize(rule_.size());
  p_.resize(rule_.size());
  p_lo_ = kInf;
  p_hi_ = -kInf;
  bool any = false;
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    // Recover log|f| from the probe values instead of re-evaluating f.
    p_[i] = p(rule_.nodes[i]);
    const double v = rb.values[i];
    log_a_[i] = v == 0.0 ? -kInf : std::log(v) / p_[i];
    if (v != 0.0) {
      any = true;
      p_lo_ = std::min(p_lo_, p_[i]);
      p_hi_ = std::max(p_hi_, p_[i]);
    }
  }
  if (!any) {
    p_lo_ = p.p_minus();
    p_hi_ = p.p_plus();
  }
  zero_ = !any || rho_ == 0.0;
}

double ModularCurve::operator()(double lambda) const {
  const double ll = std::log(lambda);
  std::vector<double> v(log_a_.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::isinf(log_a_[i]) && log_a_[i] < 0 ? 0.0 : std::exp(p_[i] * (log_a_[i] - ll));
  const auto r = rule_.integrate(v);
  return r.finite ? r.value : kInf;
}

NormResult solve_norm(const ModularCurve& curve, const NormOptions& opts) {
  NormResult out;
  if (curve.zero()) return out;
  const double rho = curve.at_one();
  if (!std::isfinite(rho)) throw NotInSpace("modular is infinite for every lambda");

  // Norm-modular lemma bracket, then widened until it truly brackets the root.
  double lo, hi;
  if (rho >= 1.0) {
    lo = std::pow(rho, 1.0 / curve.node_p_plus());
    hi = std::pow(rho, 1.0 / curve.node_p_minus());
  } else {
    lo = std::pow(rho, 1.0 / curve.node_p_minus());
    hi = std::pow(rho, 1.0 / curve.node_p_plus());
  }
  lo *= 1.0 - 1e-9;
  hi *= 1.0 + 1e-9;
  for (int k = 0; k < 200 && curve(lo) <= 1.0; ++k) lo *= 0.5;
  for (int k = 0; k < 200 && curve(hi) > 1.0; ++k) hi *= 2.0;

  int it = 0;
  while (hi - lo > opts.tol * lo && it < opts.max_iterations) {
    const double mid = std::sqrt(lo * hi);
    if (curve(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  out.lo = lo;
  out.hi = hi;
  out.value = std::sqrt(lo * hi);
  out.modular_at_value = curve(out.value);
  out.iterations = it;
  return out;
}

double modular(const ScalarField& f, const ExponentFunction& p, const Cube& domain,
               const IntegrationPlan& plan) {
  ModularCurve curve(f, p, domain, plan);
  if (!std::isfinite(curve.at_one()))
    throw InfiniteModular("|f|^p is not integrable on " + domain.describe(), 1.0);
  return curve.at_one();
}

NormResult luxemburg_norm(const ScalarField& f, const ExponentFunction& p, const Cube& domain,
                          const NormOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidInput("norm tolerance must be positive");
  return solve_norm(ModularCurve(f, p, domain, opts.plan), opts);
}

NormResult luxemburg_norm(const ScalarField& f, const ExponentFunction& p,
                          const NormOptions& opts) {
  if (!f.support) throw InvalidInput("luxemburg_norm needs a field with bounded support");
  return luxemburg_norm(f, p, *f.support, opts);
}

NormResult weighted_norm(const ScalarField& f, const ScalarField& w, const ExponentFunction& p,
                         const Cube& domain, const NormOptions& opts) {
  return luxemburg_norm(w.times(f), p, domain, opts);
}

double holder_defect(const ScalarField& f, const ScalarField& g, const ExponentFunction& p,
                     const Cube& q, const NormOptions& opts) {
  const double nf = luxemburg_norm(f, p, q, opts).value;
  const double ng = luxemburg_norm(g, p.conjugate(), q, opts).value;
  if (nf == 0.0 || ng == 0.0) return 0.0;
  const ScalarField fg = f.times(g);
  IntegrationPlan ip = opts.plan.with_singularities(fg.singular_points)
                           .with_splits(fg.split_points)
                           .with_splits(p.breakpoints());
  const double integral = integrate_cube([&fg](const Point& x) { return std::abs(fg(x)); }, q, ip);
  return integral / (nf * ng);
}

double indicator_norm(const ExponentFunction& p, const Cube& q, const NormOptions& opts) {
  if (p.is_constant()) return std::pow(q.measure(), 1.0 / p.p_minus());
  return luxemburg_norm(ScalarField::constant(1.0), p, q, opts).value;
}

CharacteristicReport one_characteristic(const ExponentFunction& p, const CubeFamily& family,
                                        const NormOptions& opts) {
  CharacteristicReport rep;
  const ExponentFunction pc = p.conjugate();
  for (const auto& q : family.cubes()) {
    CharacteristicReport::Row row{q, 0.0, false, {}};
    try {
      row.value = indicator_norm(p, q, opts) * indicator_norm(pc, q, opts) / q.measure();
    } catch (const UnboundedConjugate& e) {
      row.value = kInf;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  finalize_report(rep, family);
  return rep;
}

LargeCubeConstants large_cube_constants(const ExponentFunction& p, const std::vector<Cube>& cubes,
                                        const NormOptions& opts) {
  if (cubes.empty()) throw InvalidInput("large-cube family is empty");
  LargeCubeConstants out;
  for (const auto& q : cubes) {
    if (q.measure() < 1.0 * (1.0 - 1e-12))
      throw InvalidInput("large-cube constants need |Q| >= 1, got " + q.describe());
    const double chi = indicator_norm(p, q, opts);
    const double ref = std::pow(q.measure(), 1.0 / p.p_infty());
    out.d1 = std::max(out.d1, ref / chi);
    out.d2 = std::max(out.d2, chi / ref);
  }
  return out;
}

}  // namespace vexp
