#include "vexp/matrix_characteristic.hpp"

#include <cmath>
#include <limits>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Kinks of y -> |W(x) W^-1(y)|_op for radial entries sit where |y - c| = |x - c|;
// in one dimension those are x and its mirror images through each c.
std::vector<Point> inner_splits(const MatrixWeight& w, const Point& x, int n) {
  std::vector<Point> out{x};
  if (n == 1)
    for (const auto& c : w.singular_points()) {
      Point m{};
      m[0] = 2.0 * c[0] - x[0];
      out.push_back(m);
    }
  return out;
}

}  // namespace

double matrix_app_value(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                        const MatrixOptions& opts, std::size_t* nodes) {
  const ExponentFunction pc = p.conjugate();
  if (!pc.bounded())
    throw UnboundedConjugate("matrix characteristic needs p_minus > 1 for the inner norm");
  const int n = q.dim();
  const auto sing = w.singular_points();

  const ScalarFn g = [&](const Point& x) {
    const Mat wx = w(x);
    const ScalarField inner{[&w, wx](const Point& y) { return op_norm(wx * w.inverse_at(y)); },
                            sing, inner_splits(w, x, n), std::nullopt};
    try {
      return luxemburg_norm(inner, pc, q, opts.inner).value;
    } catch (const NotInSpace&) {
      return kInf;
    }
  };
  const ScalarField outer{g, sing, {}, std::nullopt};
  try {
    const ModularCurve curve(outer, p, q, opts.outer.plan);
    if (nodes) *nodes = curve.nodes();
    return solve_norm(curve, opts.outer).value / q.measure();
  } catch (const NotInSpace&) {
    return kInf;
  }
}

MatrixCharacteristicReport matrix_app_characteristic(const MatrixWeight& w,
                                                     const ExponentFunction& p,
                                                     const CubeFamily& family,
                                                     const MatrixOptions& opts) {
  MatrixCharacteristicReport rep;
  rep.cap = opts.cap;
  for (const auto& q : family.cubes()) {
    std::size_t nodes = 0;
    rep.rows.push_back({q, matrix_app_value(w, p, q, opts, &nodes), false, {}});
    rep.grid_nodes = std::max(rep.grid_nodes, nodes);
  }
  finalize_report(rep, family);
  return rep;
}

double reduced_value(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                     const ReducingOptions& opts) {
  const ReducingOperator r = reducing_operator(w, p, q, opts);
  const ReducingOperator rbar = reducing_operator(w.inverse(), p.conjugate(), q, opts);
  return op_norm(r.matrix * rbar.matrix);
}

CharacteristicReport reduced_characteristic(const MatrixWeight& w, const ExponentFunction& p,
                                            const CubeFamily& family,
                                            const ReducingOptions& opts, double cap) {
  CharacteristicReport rep;
  rep.cap = cap;
  for (const auto& q : family.cubes()) {
    double v;
    std::string note;
    try {
      v = reduced_value(w, p, q, opts);
    } catch (const NotInSpace& e) {
      v = kInf;
      note = e.what();
    } catch (const EllipsoidFitError& e) {
      v = kInf;
      note = e.what();
    }
    rep.rows.push_back({q, v, false, note});
  }
  finalize_report(rep, family);
  return rep;
}

MatrixToScalarReport matrix_to_scalar_check(const MatrixWeight& w, const Vec& e,
                                            const ExponentFunction& p, const CubeFamily& family,
                                            const MatrixOptions& opts) {
  if (!(e.norm() > 0.0)) throw InvalidInput("direction must be nonzero");
  MatrixToScalarReport out;
  out.e = e;
  CharOptions co;
  co.norm = opts.outer;
  co.cap = opts.cap;
  out.scalar = app_characteristic(w.direction_weight(e), p, family, co);
  out.matrix = matrix_app_characteristic(w, p, family, opts);
  if (out.matrix.divergent)
    out.passes = true;  // the bound is vacuous
  else
    out.passes = !out.scalar.divergent &&
                 out.scalar.sup_value <= 4.0 * out.k_holder * out.matrix.sup_value * (1.0 + 1e-6);
  return out;
}

MatrixOpennessResult matrix_openness_sweep(const MatrixWeight& w, const ExponentFunction& p,
                                           const std::vector<double>& s_grid,
                                           const CubeFamily& family, Side side,
                                           const MatrixOptions& opts) {
  if (side == Side::Right && !p.bounded())
    throw UnboundedConjugate("right openness needs p_plus < inf");
  if (side == Side::Left && !(p.p_minus() > 1.0))
    throw UnboundedConjugate("left openness needs p_minus > 1");
  MatrixOpennessResult out;
  out.side = side;
  for (double s : s_grid) {
    MatrixOpennessRow row{s, matrix_app_characteristic(w, openness_exponent(p, s, side), family,
                                                       opts)};
    if (row.report.divergent && !out.boundary) out.boundary = s;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace vexp
