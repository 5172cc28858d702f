#pragma once

#include <optional>
#include <vector>

#include "vexp/weight.hpp"

namespace vexp {

struct CharOptions {
  NormOptions norm{};
  double cap = 1e12;
};

// |Q|^-1 ||w chi_Q||_p ||w^-1 chi_Q||_p'; +inf when either norm is infinite.
double app_value(const Weight& w, const ExponentFunction& p, const Cube& q,
                 const NormOptions& opts = NormOptions{});

CharacteristicReport app_characteristic(const Weight& w, const ExponentFunction& p,
                                        const CubeFamily& family,
                                        const CharOptions& opts = CharOptions{});

// avg_Q v * (avg_Q v^{1-p0'})^{p0-1}.
double classical_ap_value(const Weight& v, double p0, const Cube& q,
                          const IntegrationPlan& plan = IntegrationPlan{});

CharacteristicReport classical_ap_characteristic(const Weight& v, double p0,
                                                 const CubeFamily& family,
                                                 const CharOptions& opts = CharOptions{});

enum class Side { Right, Left };

// RIGHT: s p(.). LEFT: q(.) with q'(.) = s p'(.).
ExponentFunction openness_exponent(const ExponentFunction& p, double s, Side side);

struct OpennessRow {
  double s = 1.0;
  CharacteristicReport report;
};

struct OpennessResult {
  Side side = Side::Right;
  std::vector<OpennessRow> rows;
  std::optional<double> boundary;  // first s whose characteristic is divergent
};

OpennessResult openness_sweep(const Weight& w, const ExponentFunction& p,
                              const std::vector<double>& s_grid, const CubeFamily& family,
                              Side side, const CharOptions& opts = CharOptions{});

}  // namespace vexp
