#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vexp/exponent.hpp"
#include "vexp/quadrature.hpp"

using namespace vexp;

TEST_CASE("gauss-legendre is exact for polynomials of degree 2n-1") {
  for (int order : {1, 2, 5, 8, 16, 32}) {
    const auto& gl = gauss_legendre(order);
    double wsum = 0.0;
    for (double w : gl.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * order - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      s += gl.weights[i] * std::pow(gl.nodes[i], deg - 1);
    // integral of x^{deg-1} on [-1,1], deg - 1 even
    CHECK(s == doctest::Approx(2.0 / deg).epsilon(1e-13));
  }
  CHECK_THROWS_AS(gauss_legendre(0), InvalidInput);
}

TEST_CASE("integration of power singularities against closed forms") {
  const Cube q(1, Point{}, 2.0);
  IntegrationPlan plan;
  plan.singular_points = {Point{}};
  for (double a : {-0.5, -0.9, -0.975, 0.3}) {
    const double got =
        integrate_cube([a](const Point& x) { return std::pow(std::abs(x[0]), a); }, q, plan);
    CHECK(got == doctest::Approx(oracle::power_integral_1d(a, 0.0, 1.0)).epsilon(1e-8));
  }
  // off-centre singularity inside the cube
  IntegrationPlan off;
  off.singular_points = {Point{0.3}};
  const double got = integrate_cube(
      [](const Point& x) { return std::pow(std::abs(x[0] - 0.3), -0.5); }, q, off);
  CHECK(got == doctest::Approx(2.0 * (std::sqrt(1.3) + std::sqrt(0.7))).epsilon(1e-9));
}

TEST_CASE("two-dimensional singular integral matches the polar oracle") {
  const Cube q(2, Point{}, 2.0);
  IntegrationPlan plan;
  plan.singular_points = {Point{}};
  for (double a : {0.5, 1.5}) {
    const double got =
        integrate_cube([a](const Point& x) { return std::pow(norm(x), -a); }, q, plan);
    CHECK(got == doctest::Approx(oracle::square_power_integral(a)).epsilon(1e-8));
  }
}

TEST_CASE("non-integrable singularity raises InfiniteModular") {
  const Cube q(1, Point{}, 2.0);
  IntegrationPlan plan;
  plan.singular_points = {Point{}};
  CHECK_THROWS_AS(
      integrate_cube([](const Point& x) { return std::pow(std::abs(x[0]), -1.005); }, q, plan),
      InfiniteModular);
  CHECK_THROWS_AS(
      integrate_cube([](const Point& x) { return 1.0 / std::abs(x[0]); }, q, plan),
      InfiniteModular);
}

TEST_CASE("jump discontinuities are integrated exactly through split points") {
  const Cube q(1, Point{}, 2.0);
  IntegrationPlan plan;
  plan.split_points = {Point{0.1234}};
  const double got =
      integrate_cube([](const Point& x) { return x[0] < 0.1234 ? 2.0 : 5.0; }, q, plan);
  CHECK(got == doctest::Approx(2.0 * 1.1234 + 5.0 * 0.8766).epsilon(1e-13));
}

TEST_CASE("harmonic mean") {
  const Cube q(1, Point{}, 2.0);
  CHECK(harmonic_mean(ExponentFunction::constant(1.7), q) == doctest::Approx(1.7));
  // 1/p_Q = (1/2 + 1/3) / 2
  CHECK(harmonic_mean(ExponentFunction::piecewise(0, 0.0, 2.0, 3.0), q) ==
        doctest::Approx(2.4).epsilon(1e-12));
  // log_decay on [0,1] against composite Simpson at 10^6 panels
  const auto p = ExponentFunction::log_decay(2.0, 1.0);
  const Cube unit(1, Point{0.5}, 1.0);
  const double inv = oracle::simpson(
      [](double x) { return 1.0 / (2.0 + 1.0 / std::log(std::numbers::e + x)); }, 0.0, 1.0,
      1000000);
  CHECK(harmonic_mean(p, unit) == doctest::Approx(1.0 / inv).epsilon(1e-12));
}

TEST_CASE("exponent construction and conjugation") {
  CHECK_THROWS_AS(ExponentFunction::constant(0.5), InvalidInput);
  CHECK_THROWS_AS(ExponentFunction::constant(INFINITY), InvalidInput);
  CHECK_THROWS_AS(ExponentFunction::piecewise(0, 0.0, 2.0, 0.9), InvalidInput);

  const auto p = ExponentFunction::piecewise(0, 0.0, 2.0, 3.0);
  CHECK(p.conjugate().conjugate().same_as(p));
  oracle::Gen g(7);
  for (int i = 0; i < 200; ++i) {
    const Point x{g.uniform(-5, 5)};
    CHECK(1.0 / p(x) + 1.0 / p.conjugate()(x) == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(ExponentFunction::constant(1.0).conjugate().p_plus() == INFINITY);
  CHECK_FALSE(ExponentFunction::constant(1.0).conjugate().bounded());

  // left scaling: q' = s p'
  const auto q = ExponentFunction::constant(1.5).left_scaled(1.2);
  CHECK(conjugate_exponent(q(Point{})) == doctest::Approx(1.2 * 3.0));
  CHECK(ExponentFunction::constant(1.5).scaled(1.2)(Point{}) == doctest::Approx(1.8));
}

TEST_CASE("defect exponent solves 1/(s p) = 1/(r p) + 1/v") {
  const auto p = ExponentFunction::constant(1.5);
  const auto v = defect_exponent(p, 1.05, 1.2);
  CHECK(1.0 / (1.05 * 1.5) == doctest::Approx(1.0 / (1.2 * 1.5) + 1.0 / v(Point{})));
  CHECK_THROWS_AS(defect_exponent(p, 1.2, 1.1), InvalidInput);
}

TEST_CASE("Diening constant") {
  ExponentBounds b{2.0, 3.0, 2.0, 1.0, 0.0};
  const ExponentFunction p([](const Point&) { return 2.5; }, b);
  // (2 sqrt 4)^{4 (3 - 2)} = 256 against e^{1 (1 + log2 2)} = e^2
  CHECK(diening_constant(p, 4) == doctest::Approx(256.0));
  CHECK(diening_constant(ExponentFunction::constant(2.0), 1) == 1.0);
}

TEST_CASE("log-Holder estimates") {
  std::vector<Point> grid;
  for (int i = -200; i <= 200; ++i) grid.push_back(Point{i * 0.05});
  const auto c = estimate_lh_constants(ExponentFunction::constant(2.0), grid);
  CHECK(c.lh0 == 0.0);
  CHECK(c.lhinf == 0.0);
  CHECK(c.p_infty == doctest::Approx(2.0));

  const auto ld = estimate_lh_constants(ExponentFunction::log_decay(2.0, 1.0), grid);
  CHECK(ld.p_infty == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(ld.lhinf == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ld.lh0 > 0.0);
  CHECK(validate_exponent(ExponentFunction::log_decay(2.0, 1.0), grid).empty());

  // declared bounds that the samples contradict are reported
  ExponentBounds wrong{2.5, 3.0, 2.5, 0.0, 0.0};
  const ExponentFunction bad([](const Point& x) { return 2.0 + std::abs(x[0]) / 10.0; }, wrong);
  CHECK_FALSE(validate_exponent(bad, grid).empty());
}

TEST_CASE("cube geometry") {
  const Cube q(2, Point{0.5, -0.5}, 1.0);
  CHECK(q.measure() == 1.0);
  CHECK(q.contains(Point{0.0, -1.0}));
  CHECK_FALSE(q.contains(Point{1.01, 0.0}));
  const auto kids = q.children();
  CHECK(kids.size() == 4);
  double m = 0.0;
  for (const auto& c : kids) {
    CHECK(q.contains(c));
    m += c.measure();
  }
  CHECK(m == doctest::Approx(q.measure()));
  CHECK_THROWS_AS(Cube(1, Point{}, 0.0), InvalidInput);
  CHECK_THROWS_AS(Cube(4, Point{}, 1.0), InvalidInput);
  for (int k = 0; k < 5; ++k) CHECK(special_cube(1, k).measure() > 0.0);
}

TEST_CASE("cube family generation") {
  FamilySpec s;
  s.dim = 1;
  s.level_min = 0;
  s.level_max = 3;
  s.shrink_targets = {Point{}};
  s.shrink_levels = 5;
  const auto f = CubeFamily::generate(s);
  // 2 + 4 + 8 + 16 dyadic cubes in [-1,1] plus 6 shrinking
  CHECK(f.size() == 30 + 6);
  REQUIRE(f.shrinking().size() == 1);
  const auto& seq = f.shrinking()[0];
  CHECK(seq.size() == 6);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    CHECK(f[seq[k]].side() == doctest::Approx(f[seq[k - 1]].side() / 2));
    CHECK(f[seq[k - 1]].contains(f[seq[k]]));
  }

  // capped levels keep the cubes touching a target and are seed-deterministic
  FamilySpec big = s;
  big.level_max = 10;
  big.max_per_level = 8;
  big.seed = 42;
  const auto a = CubeFamily::generate(big), b = CubeFamily::generate(big);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].center() == b[i].center());
  bool touches_level10 = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.tags()[i].kind == CubeFamily::Kind::Dyadic && a.tags()[i].level == 10 &&
        a[i].contains(Point{}))
      touches_level10 = true;
  CHECK(touches_level10);

  FamilySpec bad = s;
  bad.level_min = 4;
  bad.level_max = 2;
  CHECK_THROWS_AS(CubeFamily::generate(bad), InvalidInput);
}

TEST_CASE("divergence flag") {
  FamilySpec s;
  s.dim = 1;
  s.dyadic = false;
  s.shrink_targets = {Point{}};
  s.shrink_levels = 4;
  const auto f = CubeFamily::generate(s);

  CharacteristicReport grow;
  for (double v : {1.0, 1.5, 2.0, 3.0, 4.5}) grow.rows.push_back({Cube(1, Point{}, 1.0), v});
  finalize_report(grow, f);
  CHECK(grow.divergent);  // 2.0 < 3.0 < 4.5 with 4.5 >= 2 * 2.0
  CHECK_FALSE(grow.sup().has_value());

  CharacteristicReport flat;
  for (double v : {1.0, 1.5, 1.8, 1.85, 1.86}) flat.rows.push_back({Cube(1, Point{}, 1.0), v});
  finalize_report(flat, f);
  CHECK_FALSE(flat.divergent);
  CHECK(*flat.sup() == 1.86);
  CHECK(flat.argmax == 4);

  CharacteristicReport capped;
  capped.cap = 10.0;
  for (double v : {1.0, 11.0, 1.0, 1.0, 1.0}) capped.rows.push_back({Cube(1, Point{}, 1.0), v});
  finalize_report(capped, f);
  CHECK(capped.divergent);
  CHECK(capped.rows[1].divergent);
}

TEST_CASE("rng is reproducible and in range") {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
