#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vexp/matrix_weight.hpp"

namespace vexp {

// Minimum-volume origin-centered ellipsoid {x : x^T M x <= 1} containing the
// points +-b_j (Khachiyan iteration with Todd-Yildirim away steps).
struct MveeResult {
  Mat shape;  // M
  int iterations = 0;
  double gap = 0.0;  // max_j b_j^T M b_j - 1 at exit
};
MveeResult symmetric_mvee(const std::vector<Vec>& points, double tol = 1e-12,
                          int max_iterations = 200000);

// Unit directions on the half-sphere: equally spaced angles for d = 2, a
// Fibonacci lattice for d = 3, {1} for d = 1.
std::vector<Vec> direction_grid(int d, int m);
std::vector<Vec> random_directions(int d, int m, std::uint64_t seed);

struct ReducingOptions {
  int directions = 0;       // 0: 128 for d = 2, 512 for d = 3
  int held_out = 64;
  std::uint64_t seed = 0;
  double tol = 1e-4;        // slack on the sqrt(d) bound
  NormOptions norm{};
};

struct ReducingOperator {
  Mat matrix;
  Cube cube;
  double sandwich_factor = 1.0;  // max |R e| / r(e) over held-out directions
  double lower_slack = 1.0;      // max r(e) / |R e| over held-out directions (<= 1 expected)
  int direction_samples = 0;
  std::vector<Vec> held_out;
  std::vector<double> held_out_r;
};

// Norm function r(e) = |Q|^{-1/p_Q} || |W(.) e| chi_Q ||_p.
double reduced_norm(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                    const Vec& e, const NormOptions& opts = NormOptions{});

// Fits R with r(e) <= |R e| <= sqrt(d) r(e). Throws EllipsoidFitError when a
// held-out direction breaks the upper bound by more than the tolerance.
ReducingOperator reducing_operator(const MatrixWeight& w, const ExponentFunction& p,
                                   const Cube& q, const ReducingOptions& opts = ReducingOptions{});

// Same construction for an arbitrary norm function on R^d.
ReducingOperator fit_norm_ellipsoid(const std::function<double(const Vec&)>& r, int d,
                                    const ReducingOptions& opts = ReducingOptions{});

}  // namespace vexp
