#pragma once

#include <optional>
#include <vector>

#include "vexp/characteristic.hpp"
#include "vexp/ellipsoid.hpp"

namespace vexp {

struct MatrixOptions {
  // The inner y-norm is solved once per outer node, so it runs tighter than
  // the outer norm to keep the outer adaptive rule from chasing solver noise.
  NormOptions inner{1e-11, IntegrationPlan{8, 40, 6, 400, 1e-11, {}, {}}, 200};
  NormOptions outer{1e-8, IntegrationPlan{8, 40, 6, 400, 1e-8, {}, {}}, 200};
  double cap = 1e12;
};

struct MatrixCharacteristicReport : CharacteristicReport {
  std::size_t grid_nodes = 0;  // largest outer node count over the family
};

// |Q|^-1 || || |W(x) W^-1(y)|_op chi_Q(y) ||_{p',y} chi_Q(x) ||_{p,x}; +inf on divergence.
double matrix_app_value(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                        const MatrixOptions& opts = MatrixOptions{},
                        std::size_t* nodes = nullptr);

MatrixCharacteristicReport matrix_app_characteristic(const MatrixWeight& w,
                                                     const ExponentFunction& p,
                                                     const CubeFamily& family,
                                                     const MatrixOptions& opts = MatrixOptions{});

// |R_Q Rbar_Q|_op with R_Q for (W, p) and Rbar_Q for (W^-1, p').
double reduced_value(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                     const ReducingOptions& opts = ReducingOptions{});

CharacteristicReport reduced_characteristic(const MatrixWeight& w, const ExponentFunction& p,
                                            const CubeFamily& family,
                                            const ReducingOptions& opts = ReducingOptions{},
                                            double cap = 1e12);

struct MatrixToScalarReport {
  Vec e;
  CharacteristicReport scalar;         // [|W e|] over the family
  MatrixCharacteristicReport matrix;   // [W] over the family
  double k_holder = 3.0;
  bool passes = false;                 // [|W e|] <= 4 K [W]
};

MatrixToScalarReport matrix_to_scalar_check(const MatrixWeight& w, const Vec& e,
                                            const ExponentFunction& p, const CubeFamily& family,
                                            const MatrixOptions& opts = MatrixOptions{});

struct MatrixOpennessRow {
  double s = 1.0;
  MatrixCharacteristicReport report;
};

struct MatrixOpennessResult {
  Side side = Side::Right;
  std::vector<MatrixOpennessRow> rows;
  std::optional<double> boundary;
};

MatrixOpennessResult matrix_openness_sweep(const MatrixWeight& w, const ExponentFunction& p,
                                           const std::vector<double>& s_grid,
                                           const CubeFamily& family, Side side,
                                           const MatrixOptions& opts = MatrixOptions{});

}  // namespace vexp
