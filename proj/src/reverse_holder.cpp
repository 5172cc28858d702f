#include "vexp/reverse_holder.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double SubsetPair::e_measure() const {
  double m = 0.0;
  for (const auto& c : e) m += c.measure();
  return m;
}

std::vector<SubsetPair> sample_pairs(const CubeFamily& family, std::uint64_t seed,
                                     int random_per_cube) {
  Rng rng(seed);
  std::vector<SubsetPair> out;
  for (const auto& q : family.cubes()) {
    for (const auto& c : q.children()) out.push_back({q, {c}});
    out.push_back({q, {Cube(q.dim(), q.center(), 0.25 * q.side())}});
    const Box b = q.box();
    for (int k = 0; k < random_per_cube; ++k) {
      const double side = q.side() * std::exp2(-rng.uniform(0.0, 6.0));
      Point c{};
      for (int i = 0; i < q.dim(); ++i)
        c[i] = rng.uniform(b.lo[i] + 0.5 * side, b.hi[i] - 0.5 * side);
      out.push_back({q, {Cube(q.dim(), c, side)}});
    }
  }
  return out;
}

double weight_measure(const Weight& w, const ExponentFunction& p, const std::vector<Cube>& e,
                      const IntegrationPlan& plan) {
  const IntegrationPlan ip =
      plan.with_singularities(w.singular_points()).with_splits(p.breakpoints());
  double total = 0.0;
  for (const auto& c : e)
    total += integrate_cube([&](const Point& x) { return std::pow(w(x), p(x)); }, c, ip);
  return total;
}

AInftyEstimate ainfty_fit(const Weight& w, const ExponentFunction& p,
                          const std::vector<SubsetPair>& pairs, const IntegrationPlan& plan) {
  if (pairs.empty()) throw InvalidInput("A-infinity fit needs at least one pair");
  AInftyEstimate est;
  est.delta = 1.0 / p.p_plus();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pr = pairs[i];
    for (const auto& c : pr.e)
      if (!pr.q.contains(c)) throw InvalidInput("A-infinity pair with E not inside Q");
    const double we = weight_measure(w, p, pr.e, plan);
    if (!(we > 0.0)) {
      est.skipped.push_back(i);
      est.values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double wq = weight_measure(w, p, {pr.q}, plan);
    const double v = pr.e_measure() / pr.q.measure() * std::pow(wq / we, est.delta);
    est.values.push_back(v);
    if (v > est.c1) {
      est.c1 = v;
      est.argmax = i;
    }
  }
  return est;
}

double rh_exponent_from_ainfty(double delta, double c1, int n) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("delta must lie in (0, 1]");
  if (!(c1 >= 1.0)) throw InvalidInput("C1 must be >= 1");
  check_dimension(n);
  const double denom = std::pow(2.0, n + 2 + 1.0 / delta) * (n + 1) * std::numbers::ln2 *
                       std::pow(c1, 1.0 / delta);
  return 1.0 + 1.0 / denom;
}

RHCertificate verify_classical_rh(const Weight& v, double r, const CubeFamily& family,
                                  double budget, const IntegrationPlan& plan) {
  if (!(r > 1.0)) throw InvalidInput("reverse Holder exponent must exceed 1");
  RHCertificate cert;
  cert.r = r;
  cert.budget = budget;
  cert.verified = true;
  const IntegrationPlan ip = plan.with_singularities(v.singular_points());
  const Weight vr = v.pow(r);
  for (const auto& q : family.cubes()) {
    double ratio;
    try {
      const double lhs = integrate_cube([&](const Point& x) { return vr(x); }, q, ip) / q.measure();
      const double avg = integrate_cube([&](const Point& x) { return v(x); }, q, ip) / q.measure();
      ratio = lhs / std::pow(avg, r);
    } catch (const InfiniteModular&) {
      ratio = kInf;
    }
    const bool ok = ratio <= budget;
    cert.rows.push_back({q, ratio, ok});
    if (!ok) cert.verified = false;
    if (cert.rows.size() == 1 || ratio > cert.minimal_c) {
      cert.minimal_c = ratio;
      cert.witness = cert.rows.size() - 1;
    }
  }
  return cert;
}

RHCertificate verify_norm_rh(const Weight& w, const ExponentFunction& p, double r,
                             const CubeFamily& family, double budget, const NormOptions& opts) {
  if (!(r > 1.0)) throw InvalidInput("reverse Holder exponent must exceed 1");
  RHCertificate cert;
  cert.r = r;
  cert.budget = budget;
  cert.verified = true;
  const ExponentFunction rp = p.scaled(r);
  const ScalarField wf = w.field();
  for (const auto& q : family.cubes()) {
    double ratio;
    try {
      const double pq = harmonic_mean(p, q, opts.plan);
      const double hi = luxemburg_norm(wf, rp, q, opts).value;
      const double lo = luxemburg_norm(wf, p, q, opts).value;
      // (rp)_Q = r p_Q.
      ratio = std::pow(q.measure(), -1.0 / (r * pq)) * hi / (std::pow(q.measure(), -1.0 / pq) * lo);
    } catch (const NotInSpace&) {
      ratio = kInf;
    }
    const bool ok = ratio <= budget;
    cert.rows.push_back({q, ratio, ok});
    if (!ok) cert.verified = false;
    if (cert.rows.size() == 1 || ratio > cert.minimal_c) {
      cert.minimal_c = ratio;
      cert.witness = cert.rows.size() - 1;
    }
  }
  return cert;
}

RHSearch empirical_rh_exponent(const Weight& w, const ExponentFunction& p, double budget,
                               const CubeFamily& family, double tol, double r_cap,
                               int iterations, const NormOptions& opts) {
  if (!(tol > 0.0) || !(r_cap > 1.0 + tol)) throw InvalidInput("bad r search interval");
  RHSearch out;
  auto passes = [&](double r) {
    const RHCertificate c = verify_norm_rh(w, p, r, family, budget, opts);
    out.trail.emplace_back(r, c.minimal_c);
    return c.verified;
  };
  double lo = 1.0 + tol;
  if (!passes(lo))
    throw NoCertificate("norm reverse Holder fails at r = 1 + tol with budget " +
                        std::to_string(budget));
  if (passes(r_cap)) {
    out.r = r_cap;
    out.hit_cap = true;
    return out;
  }
  double hi = r_cap;
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid))
      lo = mid;
    else
      hi = mid;
  }
  out.r = lo;
  // The bisection assumes the minimal constant grows with r; report where it did not.
  for (const auto& [ra, ca] : out.trail)
    for (const auto& [rb, cb] : out.trail)
      if (ra < rb && ca > cb * (1.0 + 1e-9) && std::isfinite(ca))
        out.monotonicity_violations.push_back("C(" + std::to_string(ra) + ") = " +
                                              std::to_string(ca) + " > C(" + std::to_string(rb) +
                                              ") = " + std::to_string(cb));
  return out;
}

}  // namespace vexp
