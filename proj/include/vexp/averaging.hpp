#pragma once

#include <vector>

#include "vexp/ellipsoid.hpp"

namespace vexp {

// avg_Q W^-1(y) f(y) dy.
Vec averaged_preimage(const MatrixWeight& w, const Cube& q, const VectorField& f,
                      const IntegrationPlan& plan = IntegrationPlan{});

// A_{W,Q} f(x) = W(x) avg_Q W^-1 f chi_Q(x).
Vec apply_averaging(const MatrixWeight& w, const Cube& q, const VectorField& f, const Point& x,
                    const IntegrationPlan& plan = IntegrationPlan{});

// Same with the reducing operator R_Q in place of W(x).
Vec apply_aux_averaging(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                        const VectorField& f, const Point& x,
                        const ReducingOptions& opts = ReducingOptions{});

// Default test fields on Q: c e chi_{Q'} over Q and its dyadic children and
// grandchildren with coordinate and seeded random directions e, plus the
// near-extremal fields |W^-1 e|^{p'-1} W^-1 e / |W^-1 e| for the same e.
std::vector<VectorField> default_test_fields(const MatrixWeight& w, const ExponentFunction& p,
                                             const Cube& q, int random_directions = 2,
                                             std::uint64_t seed = 0);

struct AveragingBound {
  double value = 0.0;        // max ratio
  std::size_t argmax = 0;
  std::vector<double> ratios;  // NaN for skipped (zero-norm) fields
};

// max over the test set of ||A_{W,Q} f||_p / ||f chi_Q||_p.
AveragingBound averaging_norm_lower_bound(const MatrixWeight& w, const Cube& q,
                                          const ExponentFunction& p,
                                          const std::vector<VectorField>& tests,
                                          const NormOptions& opts = NormOptions{});

// Same for the auxiliary operator on L^{s p(.)}.
AveragingBound aux_averaging_norm_lower_bound(const MatrixWeight& w, const Cube& q,
                                              const ExponentFunction& p, double s,
                                              const std::vector<VectorField>& tests,
                                              const ReducingOptions& opts = ReducingOptions{});

// Scalar counterpart: ||A_{w,Q} phi|| = |avg_Q w^-1 phi| ||w chi_Q||_p.
AveragingBound scalar_averaging_lower_bound(const Weight& w, const Cube& q,
                                            const ExponentFunction& p,
                                            const std::vector<ScalarField>& tests,
                                            const NormOptions& opts = NormOptions{});

}  // namespace vexp
