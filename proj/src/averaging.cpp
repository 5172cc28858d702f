#include "vexp/averaging.hpp"

#include <cmath>
#include <limits>

namespace vexp {

namespace {

IntegrationPlan field_plan(const IntegrationPlan& base, const MatrixWeight& w,
                           const VectorField& f) {
  return base.with_singularities(w.singular_points())
      .with_singularities(f.singular_points)
      .with_splits(f.split_points);
}

void track(AveragingBound& b, double r) {
  b.ratios.push_back(r);
  if (!std::isnan(r) && r > b.value) {
    b.value = r;
    b.argmax = b.ratios.size() - 1;
  }
}

}  // namespace

Vec averaged_preimage(const MatrixWeight& w, const Cube& q, const VectorField& f,
                      const IntegrationPlan& plan) {
  const IntegrationPlan ip = field_plan(plan, w, f);
  Vec out(w.d());
  for (int i = 0; i < w.d(); ++i)
    out(i) = integrate_cube(
                 [&](const Point& y) {
                   const Vec v = f(y);
                   return v.isZero(0.0) ? 0.0 : (w.inverse_at(y) * v)(i);
                 },
                 q, ip) /
             q.measure();
  return out;
}

Vec apply_averaging(const MatrixWeight& w, const Cube& q, const VectorField& f, const Point& x,
                    const IntegrationPlan& plan) {
  if (!q.contains(x)) return Vec::Zero(w.d());
  return w(x) * averaged_preimage(w, q, f, plan);
}

Vec apply_aux_averaging(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                        const VectorField& f, const Point& x, const ReducingOptions& opts) {
  if (!q.contains(x)) return Vec::Zero(w.d());
  const ReducingOperator r = reducing_operator(w, p, q, opts);
  return r.matrix * averaged_preimage(w, q, f, opts.norm.plan);
}

std::vector<VectorField> default_test_fields(const MatrixWeight& w, const ExponentFunction& p,
                                             const Cube& q, int random_directions,
                                             std::uint64_t seed) {
  const int d = w.d();
  std::vector<Vec> dirs;
  for (int i = 0; i < d; ++i) dirs.push_back(Vec::Unit(d, i));
  if (d > 1)
    for (const auto& e : vexp::random_directions(d, random_directions, seed)) dirs.push_back(e);

  std::vector<Cube> subs{q};
  for (const auto& c : q.children()) {
    subs.push_back(c);
    for (const auto& g : c.children()) subs.push_back(g);
  }

  std::vector<VectorField> out;
  for (const auto& s : subs)
    for (const auto& e : dirs) out.push_back(VectorField::indicator(s, e));

  if (p.p_minus() > 1.0) {
    const ExponentFunction pc = p.conjugate();
    for (const auto& e : dirs) {
      out.push_back(VectorField{[w, pc, e](const Point& y) -> Vec {
                                  const Vec v = w.inverse_at(y) * e;
                                  const double len = v.norm();
                                  if (!(len > 0.0) || !std::isfinite(len)) return Vec::Zero(e.size());
                                  return std::pow(len, pc(y) - 2.0) * v;
                                },
                                w.singular_points(), p.breakpoints(), "dual-extremal"});
    }
  }
  return out;
}

AveragingBound averaging_norm_lower_bound(const MatrixWeight& w, const Cube& q,
                                          const ExponentFunction& p,
                                          const std::vector<VectorField>& tests,
                                          const NormOptions& opts) {
  AveragingBound out;
  for (const auto& f : tests) {
    const double den = luxemburg_norm(f.magnitude(), p, q, opts).value;
    if (!(den > 0.0)) {
      track(out, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const Vec a = averaged_preimage(w, q, f, opts.plan);
    double num = 0.0;
    if (!a.isZero(0.0)) {
      const ScalarField g{[&w, a](const Point& x) { return (w(x) * a).norm(); },
                          w.singular_points(), {}, std::nullopt};
      try {
        num = luxemburg_norm(g, p, q, opts).value;
      } catch (const NotInSpace&) {
        num = std::numeric_limits<double>::infinity();
      }
    }
    track(out, num / den);
  }
  return out;
}

AveragingBound aux_averaging_norm_lower_bound(const MatrixWeight& w, const Cube& q,
                                              const ExponentFunction& p, double s,
                                              const std::vector<VectorField>& tests,
                                              const ReducingOptions& opts) {
  const ReducingOperator r = reducing_operator(w, p, q, opts);
  const ExponentFunction sp = p.scaled(s);
  const double chi = indicator_norm(sp, q, opts.norm);
  AveragingBound out;
  for (const auto& f : tests) {
    const double den = luxemburg_norm(f.magnitude(), sp, q, opts.norm).value;
    if (!(den > 0.0)) {
      track(out, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const Vec a = averaged_preimage(w, q, f, opts.norm.plan);
    track(out, (r.matrix * a).norm() * chi / den);
  }
  return out;
}

AveragingBound scalar_averaging_lower_bound(const Weight& w, const Cube& q,
                                            const ExponentFunction& p,
                                            const std::vector<ScalarField>& tests,
                                            const NormOptions& opts) {
  double wnorm;
  try {
    wnorm = luxemburg_norm(w.field(), p, q, opts).value;
  } catch (const NotInSpace&) {
    wnorm = std::numeric_limits<double>::infinity();
  }
  const Weight winv = w.inverse();
  AveragingBound out;
  for (const auto& phi : tests) {
    const double den = luxemburg_norm(phi, p, q, opts).value;
    if (!(den > 0.0)) {
      track(out, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const IntegrationPlan ip = opts.plan.with_singularities(w.singular_points())
                                   .with_singularities(phi.singular_points)
                                   .with_splits(phi.split_points);
    const double avg =
        integrate_cube([&](const Point& y) {
          const double v = phi(y);
          return v == 0.0 ? 0.0 : winv(y) * v;
        }, q, ip) / q.measure();
    track(out, std::abs(avg) * wnorm / den);
  }
  return out;
}

}  // namespace vexp
