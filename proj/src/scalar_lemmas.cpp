#include "vexp/scalar_lemmas.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double weighted_set_norm(const Weight& w, const ExponentFunction& p, const SubsetPair& pr,
                         bool whole, const NormOptions& opts) {
  ScalarField f = w.field();
  if (!whole) f = f.times(ScalarField::indicator_union(pr.e));
  try {
    return luxemburg_norm(f, p, pr.q, opts).value;
  } catch (const NotInSpace&) {
    return kInf;
  }
}

double family_sup(const Weight& w, const ExponentFunction& p, const CubeFamily& family,
                  const NormOptions& opts) {
  CharOptions co;
  co.norm = opts;
  return app_characteristic(w, p, family, co).sup_value;
}

void track(LemmaReport& rep, double v) {
  rep.samples.push_back(v);
  if (v > rep.fitted) rep.fitted = v;
}

}  // namespace

LemmaId parse_lemma_id(const std::string& name) {
  if (name == "SET_RATIO") return LemmaId::SetRatio;
  if (name == "WTD_DIENING") return LemmaId::WtdDiening;
  if (name == "AINFTY_L2") return LemmaId::AinftyL2;
  if (name == "REMAINDER") return LemmaId::Remainder;
  if (name == "COLLAPSE") return LemmaId::Collapse;
  throw InvalidInput("unknown lemma id: " + name);
}

std::string to_string(LemmaId id) {
  switch (id) {
    case LemmaId::SetRatio: return "SET_RATIO";
    case LemmaId::WtdDiening: return "WTD_DIENING";
    case LemmaId::AinftyL2: return "AINFTY_L2";
    case LemmaId::Remainder: return "REMAINDER";
    case LemmaId::Collapse: return "COLLAPSE";
  }
  return "?";
}

LemmaReport verify_scalar_lemma(LemmaId id, const Weight& w, const ExponentFunction& p,
                                const CubeFamily& family, const std::vector<SubsetPair>& pairs,
                                const LemmaParams& params, const NormOptions& opts) {
  LemmaReport rep;
  rep.id = id;
  const int n = family.dim();

  switch (id) {
    case LemmaId::SetRatio: {
      if (pairs.empty()) throw InvalidInput("SET_RATIO needs E in Q pairs");
      const double char_w = family_sup(w, p, family, opts);
      rep.structural = params.k_holder * char_w;
      for (const auto& pr : pairs) {
        const double ne = weighted_set_norm(w, p, pr, false, opts);
        const double nq = weighted_set_norm(w, p, pr, true, opts);
        if (!std::isfinite(nq) || !(ne > 0.0)) {
          rep.witnesses.push_back("norm not finite or zero on " + pr.q.describe());
          continue;
        }
        track(rep, pr.e_measure() / pr.q.measure() * nq / ne);
      }
      rep.passes = std::isfinite(rep.fitted) && rep.witnesses.empty() &&
                   rep.fitted <= rep.structural * (1.0 + 1e-6);
      rep.detail = "|E|/|Q| <= M ||w chi_E|| / ||w chi_Q||; M compared with K [w]";
      break;
    }
    case LemmaId::WtdDiening: {
      const double char_w = family_sup(w, p, family, opts);
      rep.structural = std::pow(char_w, p.p_plus() - p.p_minus());
      for (const auto& q : family.cubes()) {
        const LocalRange lr = local_range(p, q);
        double nw;
        try {
          nw = luxemburg_norm(w.field(), p, q, opts).value;
        } catch (const NotInSpace&) {
          rep.witnesses.push_back("infinite norm on " + q.describe());
          continue;
        }
        track(rep, std::pow(nw, lr.p_minus - lr.p_plus) / rep.structural);
      }
      rep.passes = std::isfinite(rep.fitted) && rep.witnesses.empty();
      rep.detail = "fitted L1 with ||w chi_Q||^{p-(Q)-p+(Q)} <= L1 [w]^{p+ - p-}";
      break;
    }
    case LemmaId::AinftyL2: {
      if (pairs.empty()) throw InvalidInput("AINFTY_L2 needs E in Q pairs");
      const double char_w = family_sup(w, p, family, opts);
      const double gamma =
          1.0 + 2.0 * p.lhinf() * p.p_plus() / (p.p_infty() * p.p_minus());
      rep.structural = std::pow(char_w, gamma);
      for (const auto& pr : pairs) {
        double we, wq;
        try {
          we = weight_measure(w, p, pr.e, opts.plan);
          wq = weight_measure(w, p, {pr.q}, opts.plan);
        } catch (const InfiniteModular&) {
          rep.witnesses.push_back("W not finite on " + pr.q.describe());
          continue;
        }
        if (!(we > 0.0)) continue;
        track(rep, pr.e_measure() / pr.q.measure() / std::pow(we / wq, 1.0 / p.p_plus()) /
                       rep.structural);
      }
      rep.passes = std::isfinite(rep.fitted) && rep.witnesses.empty();
      rep.detail = "fitted L2 with |E|/|Q| <= L2 [w]^gamma (W(E)/W(Q))^{1/p+}";
      break;
    }
    case LemmaId::Remainder: {
      Rng rng(params.seed);
      struct Field {
        double c, alpha;
        Point x0;
      };
      std::vector<Field> fields;
      for (int k = 0; k < params.random_fields; ++k) {
        Field f{rng.uniform(0.05, 1.0), rng.uniform(0.0, 2.0), {}};
        for (int i = 0; i < n; ++i) f.x0[i] = rng.uniform(-4.0, 4.0);
        fields.push_back(f);
      }
      const IntegrationPlan ip =
          opts.plan.with_singularities(w.singular_points()).with_splits(p.breakpoints());
      const double pinf = p.p_infty(), pminus = p.p_minus(), cinf = p.lhinf();
      if (!std::isfinite(cinf)) throw InvalidInput("REMAINDER needs a finite C_infty");
      for (const auto& q : family.cubes()) {
        for (const auto& fd : fields) {
          // 0 <= F <= 1.
          auto F = [&fd](const Point& x) {
            return fd.c / std::pow(1.0 + distance(x, fd.x0), fd.alpha);
          };
          auto mu = [&](const Point& x) { return std::pow(w(x), p(x)); };
          try {
            const double var = integrate_cube(
                [&](const Point& x) { return std::pow(F(x), p(x)) * mu(x); }, q, ip);
            const double fixed = integrate_cube(
                [&](const Point& x) { return std::pow(F(x), pinf) * mu(x); }, q, ip);
            for (double t : params.t_grid) {
              const double rem = integrate_cube(
                  [&](const Point& x) {
                    return std::pow(std::numbers::e + norm(x), -n * t * pminus) * mu(x);
                  },
                  q, ip);
              const double grow = std::exp(n * t * cinf);
              track(rep, var / (grow * fixed + rem));
              track(rep, fixed / (grow * var + rem));
            }
          } catch (const InfiniteModular&) {
            rep.witnesses.push_back("w^p not integrable on " + q.describe());
          }
        }
      }
      rep.structural = 1.0;
      rep.passes = rep.witnesses.empty() && rep.fitted <= 1.0 + 1e-8;
      rep.detail = "max of LHS/RHS over both remainder inequalities (passes when <= 1)";
      break;
    }
    case LemmaId::Collapse: {
      if (!(params.s >= 1.0 && params.s < params.r))
        throw InvalidInput("COLLAPSE needs 1 <= s < r");
      const ExponentFunction u = p.scaled(params.s);
      const ExponentFunction v = defect_exponent(p, params.s, params.r);
      const double one_v = one_characteristic(v, family, opts).sup_value;
      double cp = params.c_p;
      if (!(cp > 0.0)) cp = verify_norm_rh(w, p, params.r, family, kInf, opts).minimal_c;
      rep.structural = 32.0 * one_v * cp;
      for (const auto& q : family.cubes()) {
        try {
          const double pq = harmonic_mean(p, q, opts.plan);
          const double lhs = std::pow(q.measure(), -1.0 / (params.s * pq)) *
                             luxemburg_norm(w.field(), u, q, opts).value;
          const double rhs =
              std::pow(q.measure(), -1.0 / pq) * luxemburg_norm(w.field(), p, q, opts).value;
          track(rep, lhs / rhs);
        } catch (const NotInSpace&) {
          rep.witnesses.push_back("infinite norm on " + q.describe());
        }
      }
      rep.passes = rep.witnesses.empty() && std::isfinite(rep.structural) &&
                   rep.fitted <= rep.structural * (1.0 + 1e-6);
      rep.detail = "max u-average over p-average compared with 32 [1]_v C_p";
      break;
    }
  }
  return rep;
}

}  // namespace vexp
