#include "vexp/characteristic.hpp"

#include <cmath>
#include <limits>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_or_inf(const ScalarField& f, const ExponentFunction& p, const Cube& q,
                   const NormOptions& opts) {
  try {
    return luxemburg_norm(f, p, q, opts).value;
  } catch (const NotInSpace&) {
    return kInf;
  }
}

}  // namespace

double app_value(const Weight& w, const ExponentFunction& p, const Cube& q,
                 const NormOptions& opts) {
  const double a = norm_or_inf(w.field(), p, q, opts);
  if (!std::isfinite(a)) return kInf;
  const double b = norm_or_inf(w.inverse().field(), p.conjugate(), q, opts);
  return a * b / q.measure();
}

CharacteristicReport app_characteristic(const Weight& w, const ExponentFunction& p,
                                        const CubeFamily& family, const CharOptions& opts) {
  CharacteristicReport rep;
  rep.cap = opts.cap;
  for (const auto& q : family.cubes()) {
    CharacteristicReport::Row row{q, 0.0, false, {}};
    try {
      row.value = app_value(w, p, q, opts.norm);
    } catch (const UnboundedConjugate& e) {
      row.value = kInf;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  finalize_report(rep, family);
  return rep;
}

double classical_ap_value(const Weight& v, double p0, const Cube& q, const IntegrationPlan& plan) {
  if (!(p0 > 1.0) || !std::isfinite(p0))
    throw InvalidInput("classical A_p needs 1 < p0 < inf");
  const IntegrationPlan ip = plan.with_singularities(v.singular_points());
  const double pc = conjugate_exponent(p0);
  const Weight dual = v.pow(1.0 - pc);
  try {
    const double a = integrate_cube([&v](const Point& x) { return v(x); }, q, ip) / q.measure();
    const double b =
        integrate_cube([&dual](const Point& x) { return dual(x); }, q, ip) / q.measure();
    return a * std::pow(b, p0 - 1.0);
  } catch (const InfiniteModular&) {
    return kInf;
  }
}

CharacteristicReport classical_ap_characteristic(const Weight& v, double p0,
                                                 const CubeFamily& family,
                                                 const CharOptions& opts) {
  CharacteristicReport rep;
  rep.cap = opts.cap;
  for (const auto& q : family.cubes())
    rep.rows.push_back({q, classical_ap_value(v, p0, q, opts.norm.plan), false, {}});
  finalize_report(rep, family);
  return rep;
}

ExponentFunction openness_exponent(const ExponentFunction& p, double s, Side side) {
  if (!(s >= 1.0)) throw InvalidInput("openness scale s must be >= 1");
  return side == Side::Right ? p.scaled(s) : p.left_scaled(s);
}

OpennessResult openness_sweep(const Weight& w, const ExponentFunction& p,
                              const std::vector<double>& s_grid, const CubeFamily& family,
                              Side side, const CharOptions& opts) {
  if (side == Side::Right && !p.bounded())
    throw UnboundedConjugate("right openness needs p_plus < inf");
  if (side == Side::Left && !(p.p_minus() > 1.0))
    throw UnboundedConjugate("left openness needs p_minus > 1");
  OpennessResult out;
  out.side = side;
  for (double s : s_grid) {
    OpennessRow row{s, app_characteristic(w, openness_exponent(p, s, side), family, opts)};
    if (row.report.divergent && !out.boundary) out.boundary = s;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace vexp
