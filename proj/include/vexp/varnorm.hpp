#pragma once

#include <optional>
#include <vector>

#include "vexp/cube_family.hpp"
#include "vexp/exponent.hpp"
#include "vexp/quadrature.hpp"

namespace vexp {

// A real function with the points where it blows up or vanishes singularly
// (singular_points) and the planes where it jumps (split_points).
struct ScalarField {
  ScalarFn eval;
  std::vector<Point> singular_points;
  std::vector<Point> split_points;
  std::optional<Cube> support;  // zero outside when set

  double operator()(const Point& x) const { return eval(x); }

  static ScalarField constant(double c);
  static ScalarField indicator(const Cube& q);
  // Union of finitely many cubes (overlaps count once).
  static ScalarField indicator_union(const std::vector<Cube>& cubes);

  ScalarField times(const ScalarField& other) const;
  ScalarField scaled(double c) const;
  ScalarField abs_pow(double a) const;  // |f|^a
  // Zero outside q; the integration domain becomes q.
  ScalarField restricted(const Cube& q) const;
};

struct NormOptions {
  double tol = 1e-8;  // relative bracket width
  IntegrationPlan plan{};
  int max_iterations = 200;
};

struct NormResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double modular_at_value = 0.0;
  int iterations = 0;
};

// rho(f) = integral over Q of |f|^p.
// Throws InfiniteModular, QuadratureFailure, UnboundedConjugate.
double modular(const ScalarField& f, const ExponentFunction& p, const Cube& domain,
               const IntegrationPlan& plan = IntegrationPlan{});

// Luxemburg norm of f chi_Q. Throws NotInSpace when the modular is infinite.
NormResult luxemburg_norm(const ScalarField& f, const ExponentFunction& p, const Cube& domain,
                          const NormOptions& opts = NormOptions{});
// Uses f.support as the domain (InvalidInput if unset).
NormResult luxemburg_norm(const ScalarField& f, const ExponentFunction& p,
                          const NormOptions& opts = NormOptions{});

// ||w f chi_Q||.
NormResult weighted_norm(const ScalarField& f, const ScalarField& w, const ExponentFunction& p,
                         const Cube& domain, const NormOptions& opts = NormOptions{});

// Prepared modular lambda -> rho(f/lambda) on a fixed rule; the building block
// of luxemburg_norm, exposed for callers that reuse one integrand.
class ModularCurve {
 public:
  ModularCurve(const ScalarField& f, const ExponentFunction& p, const Cube& domain,
               const IntegrationPlan& plan);

  // +inf when the integrand is not integrable.
  double operator()(double lambda) const;
  double at_one() const { return rho_; }
  double node_p_minus() const { return p_lo_; }
  double node_p_plus() const { return p_hi_; }
  bool zero() const { return zero_; }
  std::size_t nodes() const { return rule_.size(); }

 private:
  CubeRule rule_;
  std::vector<double> log_a_;
  std::vector<double> p_;
  double rho_ = 0.0;
  double p_lo_ = 1.0;
  double p_hi_ = 1.0;
  bool zero_ = false;
};

NormResult solve_norm(const ModularCurve& curve, const NormOptions& opts);

// integral |fg| / (||f chi_Q||_p ||g chi_Q||_p'); 0 when either norm is 0.
double holder_defect(const ScalarField& f, const ScalarField& g, const ExponentFunction& p,
                     const Cube& q, const NormOptions& opts = NormOptions{});

// ||chi_Q||_p.
double indicator_norm(const ExponentFunction& p, const Cube& q,
                      const NormOptions& opts = NormOptions{});

// sup over the family of |Q|^-1 ||chi_Q||_p ||chi_Q||_p'.
CharacteristicReport one_characteristic(const ExponentFunction& p, const CubeFamily& family,
                                        const NormOptions& opts = NormOptions{});

struct LargeCubeConstants {
  double d1 = 0.0;  // max |Q|^{1/p_infty} / ||chi_Q||
  double d2 = 0.0;  // max ||chi_Q|| / |Q|^{1/p_infty}
};
LargeCubeConstants large_cube_constants(const ExponentFunction& p, const std::vector<Cube>& cubes,
                                        const NormOptions& opts = NormOptions{});

}  // namespace vexp
