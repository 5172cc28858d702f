#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vexp/exponent.hpp"
#include "vexp/geometry.hpp"

namespace vexp {

using ScalarFn = std::function<double(const Point&)>;

struct IntegrationPlan {
  int order = 8;          // Gauss-Legendre points per axis per cell
  int max_depth = 40;     // bisection depth for regular cells
  int min_layers = 6;     // geometric layers toward a singular corner
  int max_layers = 400;
  double rel_tol = 1e-10;
  std::vector<Point> singular_points;
  // Points whose coordinates are jump planes of the integrand (indicator
  // edges, exponent breakpoints). The box is cut along every interior
  // coordinate of each point before any refinement.
  std::vector<Point> split_points;

  void validate() const;
  IntegrationPlan with_singularities(const std::vector<Point>& extra) const;
  IntegrationPlan with_splits(const std::vector<Point>& extra) const;
};

// A quadrature rule on a box, adapted to a probe integrand.
//
// Regular cells carry tensor Gauss-Legendre nodes. Each singular corner owns a
// chain of self-similar shells (the box halved toward the corner, repeatedly);
// the contributions of successive shells are kept apart so evaluation can sum
// the geometric tail inside the innermost cell and detect divergence
// (shell ratio >= 1).
class CubeRule {
 public:
  struct Chain {
    std::vector<std::size_t> layer_offsets;  // layer k spans [offsets[k], offsets[k+1])
  };

  struct Result {
    double value = 0.0;
    bool finite = true;
    double worst_ratio = 0.0;  // largest shell ratio seen among chains
  };

  std::vector<Point> nodes;
  std::vector<double> weights;
  std::size_t regular_count = 0;
  std::vector<Chain> chains;
  int dim = 1;

  // Integral of the function whose values at `nodes` are given.
  Result integrate(std::span<const double> values) const;
  Result integrate(const ScalarFn& f) const;

  std::size_t size() const { return nodes.size(); }
};

struct RuleBuild {
  CubeRule rule;
  CubeRule::Result probe;   // integral of the probe on the box
  std::vector<double> values;  // probe at rule.nodes
  bool converged = true;
  double previous_estimate = 0.0;  // set when !converged
  double last_estimate = 0.0;
};

// Builds a rule adapted to `probe` on `box`. Never throws for accuracy
// problems; inspect `converged` and `probe.finite`.
RuleBuild build_rule(const ScalarFn& probe, const Box& box, const IntegrationPlan& plan);

// Integral of f over Q within plan.rel_tol.
// Throws QuadratureFailure on non-convergence, InfiniteModular on divergence.
double integrate_cube(const ScalarFn& f, const Cube& q, const IntegrationPlan& plan);
double integrate_box(const ScalarFn& f, const Box& box, const IntegrationPlan& plan);

// Harmonic mean: 1/p_Q = average over Q of 1/p.
double harmonic_mean(const ExponentFunction& p, const Cube& q,
                     const IntegrationPlan& plan = IntegrationPlan{});

// Sampled (ess) inf and sup of p over Q: a tensor grid plus the breakpoints in Q.
struct LocalRange {
  double p_minus;
  double p_plus;
};
LocalRange local_range(const ExponentFunction& p, const Cube& q, int points_per_axis = 17);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

}  // namespace vexp
