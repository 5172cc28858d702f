#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vexp/characteristic.hpp"

namespace vexp {

// E is the union of pairwise disjoint sub-cubes of Q.
struct SubsetPair {
  Cube q;
  std::vector<Cube> e;

  double e_measure() const;
};

// For each family cube: its 2^n children, the central grandchild and
// `random_per_cube` seeded random sub-cubes.
std::vector<SubsetPair> sample_pairs(const CubeFamily& family, std::uint64_t seed = 0,
                                     int random_per_cube = 8);

struct AInftyEstimate {
  double delta = 1.0;
  double c1 = 0.0;
  std::size_t argmax = 0;              // index into the pair list
  std::vector<std::size_t> skipped;    // pairs with W(E) = 0
  std::vector<double> values;          // per pair; NaN when skipped
};

// W(E) = integral over E of w^p.
double weight_measure(const Weight& w, const ExponentFunction& p, const std::vector<Cube>& e,
                      const IntegrationPlan& plan = IntegrationPlan{});

// delta = 1/p_plus; C1 = max (|E|/|Q|) (W(Q)/W(E))^delta.
AInftyEstimate ainfty_fit(const Weight& w, const ExponentFunction& p,
                          const std::vector<SubsetPair>& pairs,
                          const IntegrationPlan& plan = IntegrationPlan{});

// 1 + 1 / (2^{n+2+1/delta} (n+1) log 2 C1^{1/delta}).
double rh_exponent_from_ainfty(double delta, double c1, int n);

struct RHCertificate {
  struct Row {
    Cube cube;
    double ratio = 0.0;  // +inf when the left side diverges
    bool passes = false;
  };
  double r = 1.0;
  double budget = 2.0;
  double minimal_c = 0.0;
  std::size_t witness = 0;
  bool verified = false;
  std::vector<Row> rows;

  const Cube& witness_cube() const { return rows.at(witness).cube; }
};

// Per cube (avg v^r) / (avg v)^r against `budget` (the classical constant is 2).
RHCertificate verify_classical_rh(const Weight& v, double r, const CubeFamily& family,
                                  double budget = 2.0,
                                  const IntegrationPlan& plan = IntegrationPlan{});

// Per cube |Q|^{-1/(r p_Q)} ||w chi_Q||_{rp} / (|Q|^{-1/p_Q} ||w chi_Q||_p).
RHCertificate verify_norm_rh(const Weight& w, const ExponentFunction& p, double r,
                             const CubeFamily& family, double budget,
                             const NormOptions& opts = NormOptions{});

struct RHSearch {
  double r = 1.0;
  std::vector<std::pair<double, double>> trail;  // (r, minimal_C), in evaluation order
  std::vector<std::string> monotonicity_violations;
  bool hit_cap = false;
};

// Largest r in (1, r_cap] (bisection, `iterations` steps) whose norm RH
// constant stays within `budget`. Throws NoCertificate when r = 1 + tol fails.
RHSearch empirical_rh_exponent(const Weight& w, const ExponentFunction& p, double budget,
                               const CubeFamily& family, double tol = 1e-3, double r_cap = 4.0,
                               int iterations = 20, const NormOptions& opts = NormOptions{});

}  // namespace vexp
