#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vexp/varnorm.hpp"
#include "vexp/weight.hpp"

using namespace vexp;

namespace {

const Cube kUnit(1, Point{}, 2.0);

// Random field a |x - c|^b + d on [-1,1] with b > -1/p_plus.
ScalarField random_field(oracle::Gen& g, double p_plus) {
  const double a = g.uniform(0.1, 3.0);
  const double b = g.uniform(-0.9 / p_plus, 2.0);
  const double c = g.uniform(-1.0, 1.0);
  const double d = g.uniform(0.0, 1.0);
  return ScalarField{[=](const Point& x) { return a * std::pow(std::abs(x[0] - c), b) + d; },
                     {Point{c}}, {}, std::nullopt};
}

ExponentFunction random_exponent(oracle::Gen& g) {
  switch (g.below(3)) {
    case 0: return ExponentFunction::constant(g.uniform(1.0, 4.0));
    case 1: {
      const double lo = g.uniform(1.0, 3.0);
      return ExponentFunction::piecewise(0, g.uniform(-0.5, 0.5), lo, lo + g.uniform(0.0, 2.0));
    }
    default: return ExponentFunction::log_decay(g.uniform(1.0, 2.5), g.uniform(0.0, 1.5));
  }
}

}  // namespace

TEST_CASE("indicator norm for the two-piece exponent is the root of l^-2 + l^-3 = 1") {
  const auto p = ExponentFunction::piecewise(0, 0.0, 2.0, 3.0);
  const double root =
      oracle::bisect([](double l) { return std::pow(l, -2) + std::pow(l, -3) - 1.0; }, 1.0, 2.0);
  const auto r = luxemburg_norm(ScalarField::constant(1.0), p, kUnit);
  CHECK(r.value == doctest::Approx(root).epsilon(1e-8));
  CHECK(r.modular_at_value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.lo <= r.value);
  CHECK(r.value <= r.hi);
}

TEST_CASE("constant exponent reduces to the classical L^p norm") {
  for (double p0 : {1.0, 1.5, 2.0, 3.7}) {
    const auto p = ExponentFunction::constant(p0);
    for (double side : {0.25, 1.0, 3.0}) {
      const Cube q(1, Point{0.3}, side);
      CHECK(luxemburg_norm(ScalarField::constant(1.0), p, q).value ==
            doctest::Approx(std::pow(side, 1.0 / p0)).epsilon(1e-8));
    }
    // |x|^a on [-1,1]
    const double a = -0.4 / p0;
    const Weight w = Weight::power(a);
    CHECK(luxemburg_norm(w.field(), p, kUnit).value ==
          doctest::Approx(oracle::power_norm_1d(a, p0, 0.0, 1.0)).epsilon(1e-8));
  }
  const Cube sq(2, Point{}, 2.0);
  CHECK(luxemburg_norm(ScalarField::constant(1.0), ExponentFunction::constant(2.0), sq).value ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("weighted norm") {
  // || |x|^{-1/4} |x|^{-1/4} ||_{3/2} on [-1,1] = 8^{2/3}
  const auto p = ExponentFunction::constant(1.5);
  const auto w = Weight::power(-0.25);
  const double got = weighted_norm(w.field(), w.field(), p, kUnit).value;
  CHECK(got == doctest::Approx(oracle::power_norm_1d(-0.5, 1.5, 0.0, 1.0)).epsilon(1e-8));
  CHECK(got == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("modular and non-membership") {
  const auto p = ExponentFunction::constant(2.5);
  const auto w = Weight::power(-0.5);
  CHECK_THROWS_AS(modular(w.field(), p, kUnit), InfiniteModular);
  CHECK_THROWS_AS(luxemburg_norm(w.field(), p, kUnit), NotInSpace);
  CHECK(modular(ScalarField::constant(2.0), ExponentFunction::constant(3.0), kUnit) ==
        doctest::Approx(16.0));
  // p_plus = inf is rejected
  CHECK_THROWS_AS(luxemburg_norm(ScalarField::constant(1.0),
                                 ExponentFunction::constant(1.0).conjugate(), kUnit),
                  UnboundedConjugate);
  // zero function
  CHECK(luxemburg_norm(ScalarField::constant(0.0), p, kUnit).value == 0.0);
  // a field without support needs an explicit domain
  CHECK_THROWS_AS(luxemburg_norm(ScalarField::constant(1.0), p), InvalidInput);
  CHECK(luxemburg_norm(ScalarField::indicator(Cube(1, Point{0.5}, 0.5)), p).value ==
        doctest::Approx(std::pow(0.5, 1.0 / 2.5)).epsilon(1e-8));
}

TEST_CASE("norm properties on random fields") {
  oracle::Gen g(11);
  for (int i = 0; i < 40; ++i) {
    const auto p = random_exponent(g);
    const auto f = random_field(g, p.p_plus());
    const auto h = random_field(g, p.p_plus());
    const double nf = luxemburg_norm(f, p, kUnit).value;
    const double nh = luxemburg_norm(h, p, kUnit).value;
    const double c = g.uniform(0.1, 10.0);
    CAPTURE(p.label());
    // homogeneity
    CHECK(luxemburg_norm(f.scaled(c), p, kUnit).value == doctest::Approx(c * nf).epsilon(1e-7));
    // triangle inequality
    ScalarField sum{[f, h](const Point& x) { return f(x) + h(x); },
                    {f.singular_points[0], h.singular_points[0]}, {}, std::nullopt};
    CHECK(luxemburg_norm(sum, p, kUnit).value <= (nf + nh) * (1 + 1e-7));
    // monotone in the domain
    CHECK(luxemburg_norm(f, p, Cube(1, Point{0.5}, 1.0)).value <= nf * (1 + 1e-8));
    // modular at the norm and the norm-modular sandwich
    const double rho = modular(f, p, kUnit);
    const auto r = luxemburg_norm(f, p, kUnit);
    CHECK(r.modular_at_value == doctest::Approx(1.0).epsilon(1e-6));
    const double a = std::pow(rho, 1.0 / p.p_plus()), b = std::pow(rho, 1.0 / p.p_minus());
    CHECK(r.value >= std::min(a, b) * (1 - 1e-9));
    CHECK(r.value <= std::max(a, b) * (1 + 1e-9));
  }
}

TEST_CASE("modular curve is decreasing in lambda") {
  const auto p = ExponentFunction::piecewise(0, 0.0, 1.5, 3.0);
  const ModularCurve curve(Weight::power(-0.3).field(), p, kUnit, IntegrationPlan{});
  double prev = INFINITY;
  for (double l = 0.05; l < 20.0; l *= 1.3) {
    const double v = curve(l);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("holder defect") {
  oracle::Gen g(3);
  const auto p = ExponentFunction::constant(2.0);
  // equality case for p = 2: g = f
  const auto f = random_field(g, 2.0);
  CHECK(holder_defect(f, f, p, kUnit) == doctest::Approx(1.0).epsilon(1e-7));
  for (int i = 0; i < 20; ++i) {
    const auto q = random_exponent(g);
    if (!(q.p_minus() > 1.0)) continue;
    const auto a = random_field(g, q.p_plus());
    const auto b = random_field(g, q.conjugate().p_plus());
    CHECK(holder_defect(a, b, q, kUnit) <= 2.0);
  }
}

TEST_CASE("characteristic of the constant function") {
  FamilySpec s;
  s.level_min = 0;
  s.level_max = 3;
  const auto fam = CubeFamily::generate(s);
  const auto c = one_characteristic(ExponentFunction::constant(1.7), fam);
  CHECK(*c.sup() == doctest::Approx(1.0).epsilon(1e-12));
  const auto pw = one_characteristic(ExponentFunction::piecewise(0, 0.0, 2.0, 3.0), fam);
  CHECK(*pw.sup() >= 1.0 - 1e-9);
  CHECK(*pw.sup() < 2.0);
  // p = 1 pairs with ||chi_Q||_inf = 1
  const auto one = one_characteristic(ExponentFunction::constant(1.0), fam);
  CHECK(*one.sup() == doctest::Approx(1.0));
}

TEST_CASE("large cube constants") {
  std::vector<Cube> cubes;
  for (double side : {1.0, 2.0, 8.0}) cubes.push_back(Cube(1, Point{}, side));
  const auto c = large_cube_constants(ExponentFunction::constant(2.0), cubes);
  CHECK(c.d1 == doctest::Approx(1.0));
  CHECK(c.d2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(large_cube_constants(ExponentFunction::constant(2.0), {Cube(1, Point{}, 0.5)}),
                  InvalidInput);
}
