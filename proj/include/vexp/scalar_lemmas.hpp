#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vexp/reverse_holder.hpp"

namespace vexp {

enum class LemmaId { SetRatio, WtdDiening, AinftyL2, Remainder, Collapse };

LemmaId parse_lemma_id(const std::string& name);
std::string to_string(LemmaId id);

struct LemmaParams {
  double k_holder = 3.0;  // K_{p(.)} bound used where a lemma consumes it
  // COLLAPSE
  double r = 1.1;          // reverse Holder exponent
  double s = 1.05;         // 1 <= s < r
  double c_p = 0.0;        // RH constant at r; 0 means measure it on the family
  // REMAINDER
  std::vector<double> t_grid{0.5, 1.0, 2.0};
  int random_fields = 6;
  std::uint64_t seed = 0;
};

struct LemmaReport {
  LemmaId id = LemmaId::SetRatio;
  // Smallest multiplier making the inequality hold over the sample.
  double fitted = 0.0;
  // Structural factor the multiplier is compared against (or multiplies),
  // e.g. K [w] for SET_RATIO, [w]^{p+ - p-} for WTD_DIENING.
  double structural = 1.0;
  bool passes = false;
  std::string detail;
  std::vector<double> samples;
  std::vector<std::string> witnesses;  // divergent items
};

// The sup of the scalar characteristic over the family is computed inside
// when a lemma needs it.
LemmaReport verify_scalar_lemma(LemmaId id, const Weight& w, const ExponentFunction& p,
                                const CubeFamily& family, const std::vector<SubsetPair>& pairs,
                                const LemmaParams& params = LemmaParams{},
                                const NormOptions& opts = NormOptions{});

}  // namespace vexp
