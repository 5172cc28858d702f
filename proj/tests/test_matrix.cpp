#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vexp/averaging.hpp"
#include "vexp/matrix_characteristic.hpp"

using namespace vexp;

namespace {

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

CubeFamily small_family(int dim, int hi) {
  FamilySpec s;
  s.dim = dim;
  s.level_min = 0;
  s.level_max = hi;
  return CubeFamily::generate(s);
}

}  // namespace

TEST_CASE("operator norm") {
  CHECK(op_norm(mat2(3, 0, 0, -5)) == doctest::Approx(5.0));
  CHECK(op_norm(mat2(1, 1, 0, 1)) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
  oracle::Gen g(1);
  for (int i = 0; i < 50; ++i) {
    const Mat a = mat2(g.uniform(-2, 2), g.uniform(-2, 2), g.uniform(-2, 2), g.uniform(-2, 2));
    const double n = op_norm(a);
    // max over columns and the Frobenius bound
    CHECK(n >= a.col(0).norm() * (1 - 1e-12));
    CHECK(n >= a.col(1).norm() * (1 - 1e-12));
    CHECK(n <= a.norm() * (1 + 1e-12));
    // commutes with transposition
    CHECK(op_norm(a.transpose()) == doctest::Approx(n).epsilon(1e-12));
  }
}

TEST_CASE("matrix weights") {
  const auto w = MatrixWeight::congruence(mat2(1, 2, 0, 1),
                                          {Weight::power(-0.5), Weight::constant(2.0)});
  oracle::Gen g(2);
  std::vector<Point> grid;
  for (int i = 0; i < 30; ++i) {
    const Point x{g.uniform(-1, 1)};
    grid.push_back(x);
    const Mat m = w(x);
    CHECK((m - m.transpose()).norm() < 1e-12);
    CHECK((m * w.inverse_at(x) - Mat::Identity(2, 2)).norm() < 1e-9);
    CHECK((w.inverse()(x) - w.inverse_at(x)).norm() < 1e-9 * w.inverse_at(x).norm());
    const Vec e = vec2(g.uniform(-1, 1), g.uniform(-1, 1));
    CHECK(w.direction_weight(e)(x) == doctest::Approx((m * e).norm()));
  }
  CHECK(w.validate(grid).empty());
  CHECK(w.d() == 2);
  CHECK(w.singular_points().size() == 1);

  const auto si = MatrixWeight::scalar_identity(Weight::power(0.3), 3);
  CHECK((si(Point{0.5}) - std::pow(0.5, 0.3) * Mat::Identity(3, 3)).norm() < 1e-12);

  CHECK_THROWS_AS(MatrixWeight::congruence(mat2(1, 2, 2, 4), {Weight::constant(1.0),
                                                               Weight::constant(1.0)}),
                  InvalidInput);
  CHECK_THROWS_AS(MatrixWeight::constant(mat2(1, 2, 0, 1)), InvalidInput);
  CHECK_THROWS_AS(MatrixWeight::constant(mat2(1, 0, 0, -1)), InvalidInput);
}

TEST_CASE("symmetric MVEE recovers an ellipse") {
  const Mat m = mat2(4.0, 1.0, 1.0, 2.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const Mat root_inv = es.operatorInverseSqrt();
  std::vector<Vec> pts;
  for (int k = 0; k < 40; ++k) {
    const double t = std::numbers::pi * k / 40.0;
    pts.push_back(root_inv * vec2(std::cos(t), std::sin(t)));
  }
  const auto r = symmetric_mvee(pts);
  CHECK((r.shape - m).norm() < 1e-6);
  CHECK(r.gap < 1e-9);
  CHECK_THROWS_AS(symmetric_mvee({vec2(1, 0), vec2(2, 0)}), EllipsoidFitError);
}

TEST_CASE("direction grids") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& e : direction_grid(d, 16)) CHECK(e.norm() == doctest::Approx(1.0));
  CHECK(direction_grid(2, 16).size() == 16);
  const auto a = random_directions(3, 10, 4), b = random_directions(3, 10, 4);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() == 0.0);
}

TEST_CASE("norm ellipsoid for l1 and l-infinity norms satisfies the John sandwich") {
  for (int which = 0; which < 2; ++which) {
    const auto r = [which](const Vec& e) {
      return which == 0 ? e.cwiseAbs().sum() : e.cwiseAbs().maxCoeff();
    };
    const auto fit = fit_norm_ellipsoid(r, 2);
    CHECK(fit.sandwich_factor <= std::sqrt(2.0) * (1 + 1e-4));
    CHECK(fit.lower_slack <= 1.0);
    oracle::Gen g(which);
    for (int i = 0; i < 200; ++i) {
      const double t = g.uniform(0, 2 * std::numbers::pi);
      const Vec e = vec2(std::cos(t), std::sin(t));
      CHECK((fit.matrix * e).norm() >= r(e) * (1 - 1e-6));
      CHECK((fit.matrix * e).norm() <= std::sqrt(2.0) * r(e) * (1 + 1e-4));
    }
  }
}

TEST_CASE("reducing operators in closed-form cases") {
  const Cube q(1, Point{0.25}, 0.5);
  const auto p = ExponentFunction::constant(1.5);
  // w I: r(e) = c |e| with c = |Q|^{-1/p} ||w chi_Q||_p
  const auto w = Weight::power(-0.5);
  const auto si = reducing_operator(MatrixWeight::scalar_identity(w, 2), p, q);
  const double c = oracle::power_norm_1d(-0.5, 1.5, 0.25, 0.25) / std::pow(0.5, 1.0 / 1.5);
  CHECK((si.matrix - c * Mat::Identity(2, 2)).norm() < 1e-5 * c);
  CHECK(si.sandwich_factor <= 1.0 + 1e-6);

  // constant W0: r(e) = |W0 e|, so R = W0
  const Mat w0 = mat2(2.0, 0.5, 0.5, 1.0);
  const auto cr = reducing_operator(MatrixWeight::constant(w0), p, q);
  CHECK((cr.matrix - w0).norm() < 1e-5);
  CHECK(cr.sandwich_factor <= 1.0 + 1e-6);
  CHECK(cr.lower_slack <= 1.0);
}

TEST_CASE("matrix characteristic in reducible cases") {
  const Cube q(1, Point{0.25}, 0.5);
  const auto p = ExponentFunction::constant(1.5);
  CHECK(matrix_app_value(MatrixWeight::scalar_identity(Weight::constant(1.0), 2), p, q) ==
        doctest::Approx(1.0).epsilon(1e-7));
  // d = 1 is the scalar characteristic
  for (double a : {-0.5, 0.3}) {
    const auto w = Weight::power(a);
    for (const auto& cube : {q, Cube(1, Point{}, 2.0), Cube(1, Point{0.6}, 0.3)}) {
      CHECK(matrix_app_value(MatrixWeight::diagonal({w}), p, cube) ==
            doctest::Approx(app_value(w, p, cube)).epsilon(1e-7));
    }
  }
  // constant W: |W W^-1|_op = 1, same as w = 1
  CHECK(matrix_app_value(MatrixWeight::constant(mat2(3, 1, 1, 2)), p, q) ==
        doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("duality [W]_p = [W^-1]_p' where it holds per cube") {
  // d = 1, any p
  const auto pw = ExponentFunction::piecewise(0, 0.1, 1.5, 2.5);
  const auto w1 = MatrixWeight::diagonal({Weight::power(-0.3)});
  for (const auto& q : {Cube(1, Point{}, 2.0), Cube(1, Point{0.2}, 0.5)})
    CHECK(matrix_app_value(w1, pw, q) ==
          doctest::Approx(matrix_app_value(w1.inverse(), pw.conjugate(), q)).epsilon(1e-6));
  // d = 2 with p = 2: |W(x) W^-1(y)|_op = |W^-1(y) W(x)|_op
  const auto p2 = ExponentFunction::constant(2.0);
  const auto w2 = MatrixWeight::congruence(mat2(1, 1, 0, 1),
                                           {Weight::power(-0.3), Weight::power(0.2)});
  const Cube q(1, Point{0.1}, 1.0);
  CHECK(matrix_app_value(w2, p2, q) ==
        doctest::Approx(matrix_app_value(w2.inverse(), p2, q)).epsilon(1e-6));
}

TEST_CASE("averaging operators for a constant weight") {
  const Cube q(1, Point{}, 2.0);
  const Mat w0 = mat2(2.0, 0.5, 0.5, 1.0);
  const auto w = MatrixWeight::constant(w0);
  const Cube sub(1, Point{0.5}, 0.5);
  const Vec e = vec2(1.0, -2.0);
  const auto f = VectorField::indicator(sub, e, 3.0);
  // W avg W^-1 f = avg f = 3 e |Q'| / |Q|
  const Vec want = 3.0 * e * 0.25;
  CHECK((averaged_preimage(w, q, f) - w0.inverse() * want).norm() < 1e-12);
  CHECK((apply_averaging(w, q, f, Point{0.1}) - want).norm() < 1e-12);
  CHECK(apply_averaging(w, q, f, Point{1.5}).norm() == 0.0);
  const auto p = ExponentFunction::constant(1.5);
  CHECK((apply_aux_averaging(w, p, q, f, Point{0.1}) - want).norm() < 1e-5);
  CHECK(apply_aux_averaging(w, p, q, f, Point{-3.0}).norm() == 0.0);
}

TEST_CASE("averaging lower bounds") {
  const Cube q(1, Point{}, 2.0);
  const auto p = ExponentFunction::constant(1.5);
  // W = I, constant p: Jensen gives ||avg f chi_Q||_p <= ||f chi_Q||_p with equality for f = e chi_Q
  const auto id = MatrixWeight::scalar_identity(Weight::constant(1.0), 2);
  const auto tests = default_test_fields(id, p, q);
  CHECK(tests.size() > 10);
  const auto b = averaging_norm_lower_bound(id, q, p, tests);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-8));
  const auto aux = aux_averaging_norm_lower_bound(id, q, p, 1.1, tests);
  CHECK(aux.value == doctest::Approx(1.0).epsilon(1e-6));

  // the averaging bound stays below K [W]_Q with K = 3
  const auto w = MatrixWeight::diagonal({Weight::power(-0.5), Weight::constant(1.0)});
  const auto wb = averaging_norm_lower_bound(w, q, p, default_test_fields(w, p, q));
  CHECK(wb.value >= 1.0);
  CHECK(wb.value <= 3.0 * matrix_app_value(w, p, q));
}

TEST_CASE("matrix-to-scalar bound and matrix openness") {
  const auto fam = small_family(1, 1);
  const auto p = ExponentFunction::constant(1.5);
  const auto id = MatrixWeight::scalar_identity(Weight::constant(1.0), 2);
  const auto m2s = matrix_to_scalar_check(id, vec2(0.6, 0.8), p, fam);
  CHECK(m2s.passes);
  CHECK(*m2s.scalar.sup() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(*m2s.matrix.sup() == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(matrix_to_scalar_check(id, vec2(0, 0), p, fam), InvalidInput);

  // d = 1 openness agrees with the scalar sweep
  const auto w = Weight::power(-0.5);
  const std::vector<double> grid{1.0, 1.2};
  const auto ms = matrix_openness_sweep(MatrixWeight::diagonal({w}), p, grid, fam, Side::Right);
  const auto ss = openness_sweep(w, p, grid, fam, Side::Right);
  REQUIRE(ms.rows.size() == ss.rows.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(*ms.rows[i].report.sup() == doctest::Approx(*ss.rows[i].report.sup()).epsilon(1e-6));
  CHECK_THROWS_AS(matrix_openness_sweep(id, ExponentFunction::constant(1.0), {1.1}, fam,
                                        Side::Left),
                  UnboundedConjugate);
}
