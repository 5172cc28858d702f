#include "vexp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace vexp {

namespace {

constexpr int kMaxOrder = 32;
constexpr double kDivergentRatio = 1.0 - 1e-9;

GaussLegendre compute_gauss_legendre(int order) {
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0, p1 = x;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

std::vector<Box> halves(const Box& b) {
  std::vector<Box> out(std::size_t{1} << b.dim);
  for (std::size_t mask = 0; mask < out.size(); ++mask) {
    Box k = b;
    for (int i = 0; i < b.dim; ++i) {
      const double mid = 0.5 * (b.lo[i] + b.hi[i]);
      if ((mask >> i) & 1)
        k.lo[i] = mid;
      else
        k.hi[i] = mid;
    }
    out[mask] = k;
  }
  return out;
}

double max_side(const Box& b) {
  double s = 0.0;
  for (int i = 0; i < b.dim; ++i) s = std::max(s, b.hi[i] - b.lo[i]);
  return s;
}

double min_side(const Box& b) {
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < b.dim; ++i) s = std::min(s, b.hi[i] - b.lo[i]);
  return s;
}

struct CellEval {
  double value = 0.0;
  double abs = 0.0;
  std::vector<Point> pts;
  std::vector<double> w;
  std::vector<double> f;
};

class Builder {
 public:
  Builder(const ScalarFn& f, const IntegrationPlan& plan, int dim)
      : f_(f), plan_(plan), gl_(gauss_legendre(plan.order)), dim_(dim) {}

  void piece(const Box& b, int depth) {
    const double slack = 1e-12 * max_side(b);
    std::vector<const Point*> inside;
    for (const auto& p : plan_.singular_points)
      if (b.contains(p, slack)) inside.push_back(&p);
    if (inside.empty()) {
      regular_piece(b);
      return;
    }
    for (const Point* p : inside) {
      std::vector<int> dims;
      for (int i = 0; i < dim_; ++i)
        if ((*p)[i] > b.lo[i] + slack && (*p)[i] < b.hi[i] - slack) dims.push_back(i);
      if (dims.empty()) continue;
      std::vector<Box> parts{b};
      for (int i : dims) {
        std::vector<Box> next;
        for (const auto& part : parts) {
          Box lo = part, hi = part;
          lo.hi[i] = (*p)[i];
          hi.lo[i] = (*p)[i];
          next.push_back(lo);
          next.push_back(hi);
        }
        parts = std::move(next);
      }
      for (const auto& part : parts) piece(part, depth + 1);
      return;
    }
    // Every singular point in b sits on a corner.
    std::vector<unsigned> masks;
    for (const Point* p : inside) {
      unsigned mask = 0;
      for (int i = 0; i < dim_; ++i)
        if (std::abs((*p)[i] - b.hi[i]) <= slack) mask |= 1u << i;
      if (std::find(masks.begin(), masks.end(), mask) == masks.end()) masks.push_back(mask);
    }
    if (masks.size() == 1 || depth > 60) {
      chain(b, masks.front(), *inside.front());
      return;
    }
    for (const auto& k : halves(b)) piece(k, depth + 1);
  }

  CubeRule finish(std::vector<double>* values) {
    converged = !chain_failed_ && unresolved_ <= 10.0 * plan_.rel_tol * accepted_abs_;
    CubeRule rule;
    rule.dim = dim_;
    rule.nodes = std::move(reg_pts_);
    rule.weights = std::move(reg_w_);
    *values = std::move(reg_f_);
    rule.regular_count = rule.nodes.size();
    for (auto& c : chains_) {
      CubeRule::Chain ch;
      const std::size_t base = rule.nodes.size();
      for (std::size_t off : c.offsets) ch.layer_offsets.push_back(base + off);
      rule.nodes.insert(rule.nodes.end(), c.pts.begin(), c.pts.end());
      rule.weights.insert(rule.weights.end(), c.w.begin(), c.w.end());
      values->insert(values->end(), c.f.begin(), c.f.end());
      rule.chains.push_back(std::move(ch));
    }
    return rule;
  }

  bool converged = true;
  double previous = 0.0;
  double last = 0.0;

 private:
  struct ChainData {
    std::vector<std::size_t> offsets;
    std::vector<Point> pts;
    std::vector<double> w;
    std::vector<double> f;
  };

  CellEval evaluate(const Box& b) const {
    CellEval e;
    const int m = static_cast<int>(gl_.nodes.size());
    std::size_t total = 1;
    for (int i = 0; i < dim_; ++i) total *= static_cast<std::size_t>(m);
    e.pts.resize(total);
    e.w.resize(total);
    e.f.resize(total);
    std::array<double, kMaxDim> half{}, mid{};
    for (int i = 0; i < dim_; ++i) {
      half[i] = 0.5 * (b.hi[i] - b.lo[i]);
      mid[i] = 0.5 * (b.hi[i] + b.lo[i]);
    }
    std::array<int, kMaxDim> idx{};
    for (std::size_t k = 0; k < total; ++k) {
      Point x{};
      double w = 1.0;
      for (int i = 0; i < dim_; ++i) {
        x[i] = mid[i] + half[i] * gl_.nodes[idx[i]];
        w *= half[i] * gl_.weights[idx[i]];
      }
      const double v = f_(x);
      e.pts[k] = x;
      e.w[k] = w;
      e.f[k] = v;
      e.value += w * v;
      e.abs += w * std::abs(v);
      for (int i = 0; i < dim_; ++i) {
        if (++idx[i] < m) break;
        idx[i] = 0;
      }
    }
    return e;
  }

  static double coordinate_scale(const Box& b) {
    double scale = 0.0;
    for (int i = 0; i < b.dim; ++i)
      scale = std::max({scale, std::abs(b.lo[i]), std::abs(b.hi[i])});
    return scale;
  }

  // Relative rounding noise of integrand values on b: node coordinates carry
  // ~eps * scale absolute error, which is large next to a nearby singular
  // point once the side is small. Chasing the tolerance below this level only
  // refines noise, which in 2D and 3D multiplies nodes by 2^n per level.
  static double noise_level(const Box& b) {
    return 16.0 * std::numeric_limits<double>::epsilon() * coordinate_scale(b) / min_side(b);
  }

  // Cell so narrow that its nodes are only a few thousand ulps apart.
  static bool unresolvable(const Box& b) {
    return min_side(b) <= 1e5 * std::numeric_limits<double>::epsilon() * coordinate_scale(b);
  }

  static void append(const CellEval& e, std::vector<Point>& pts, std::vector<double>& w,
                     std::vector<double>& f) {
    pts.insert(pts.end(), e.pts.begin(), e.pts.end());
    w.insert(w.end(), e.w.begin(), e.w.end());
    f.insert(f.end(), e.f.begin(), e.f.end());
  }

  // Returns the accepted integral of b; nodes go to (pts, w, f).
  double refine(const Box& b, double coarse, int depth, std::vector<Point>& pts,
                std::vector<double>& w, std::vector<double>& f) {
    const auto kids = halves(b);
    std::vector<CellEval> evals;
    evals.reserve(kids.size());
    double fine = 0.0, abs = 0.0;
    for (const auto& k : kids) {
      evals.push_back(evaluate(k));
      fine += evals.back().value;
      abs += evals.back().abs;
    }
    const bool ok =
        abs == 0.0 || std::abs(fine - coarse) <= std::max(plan_.rel_tol, noise_level(b)) * abs;
    if (ok || !std::isfinite(fine) || depth >= plan_.max_depth || unresolvable(b)) {
      if (!ok && std::isfinite(fine)) {
        // Kept unless the residue matters at the scale of the whole box.
        unresolved_ += std::abs(fine - coarse);
        previous = coarse;
        last = fine;
      }
      accepted_abs_ += abs;
      for (const auto& e : evals) append(e, pts, w, f);
      return fine;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < kids.size(); ++i)
      sum += refine(kids[i], evals[i].value, depth + 1, pts, w, f);
    return sum;
  }

  void regular_piece(const Box& b) {
    const CellEval coarse = evaluate(b);
    refine(b, coarse.value, 0, reg_pts_, reg_w_, reg_f_);
  }

  void chain(const Box& b, unsigned corner_mask, const Point& corner) {
    ChainData c;
    c.offsets.push_back(0);
    double corner_scale = 0.0;
    for (int i = 0; i < dim_; ++i) corner_scale = std::max(corner_scale, std::abs(corner[i]));
    // Below this side |x - corner| carries more than ~1e-8 relative rounding
    // from the absolute coordinates, so deeper layers only add noise.
    const double floor_side = 1e8 * std::numeric_limits<double>::epsilon() * corner_scale;

    Box current = b;
    double total = 0.0;
    std::vector<double> shells;
    for (int k = 0; k < plan_.max_layers; ++k) {
      const auto kids = halves(current);
      double s = 0.0;
      for (std::size_t j = 0; j < kids.size(); ++j) {
        if (j == corner_mask) continue;
        const CellEval coarse = evaluate(kids[j]);
        s += refine(kids[j], coarse.value, 0, c.pts, c.w, c.f);
      }
      c.offsets.push_back(c.pts.size());
      shells.push_back(s);
      total += s;
      current = kids[corner_mask];

      const int layers = static_cast<int>(shells.size());
      if (!std::isfinite(s)) break;
      if (layers >= std::max(plan_.min_layers, 3)) {
        const double s1 = shells[layers - 1], s0 = shells[layers - 2], sm = shells[layers - 3];
        if (s1 == 0.0) break;
        const double rho = s0 == 0.0 ? std::numeric_limits<double>::infinity() : s1 / s0;
        const double rho_prev = sm == 0.0 ? std::numeric_limits<double>::infinity() : s0 / sm;
        if (rho >= kDivergentRatio && rho_prev >= kDivergentRatio && std::isfinite(rho)) break;
        if (rho < 1.0 && rho_prev < 1.0) {
          const double tail = s1 * rho / (1.0 - rho);
          const double tail_prev = s1 * rho_prev / (1.0 - rho_prev);
          if (std::abs(tail - tail_prev) <= plan_.rel_tol * std::abs(total + tail)) break;
        }
      }
      if (min_side(current) <= floor_side || min_side(current) < 1e-250) break;
      if (k + 1 == plan_.max_layers) {
        chain_failed_ = true;
        previous = total - s;
        last = total;
      }
    }
    chains_.push_back(std::move(c));
  }

  const ScalarFn& f_;
  const IntegrationPlan& plan_;
  const GaussLegendre& gl_;
  int dim_;
  std::vector<Point> reg_pts_;
  std::vector<double> reg_w_;
  std::vector<double> reg_f_;
  std::vector<ChainData> chains_;
  double unresolved_ = 0.0;
  double accepted_abs_ = 0.0;
  bool chain_failed_ = false;
};

// Cuts b along every interior coordinate of the split points.
std::vector<Box> split_grid(const Box& b, const std::vector<Point>& splits) {
  std::array<std::vector<double>, kMaxDim> cuts;
  for (int i = 0; i < b.dim; ++i) {
    const double slack = 1e-12 * (b.hi[i] - b.lo[i]);
    cuts[i].push_back(b.lo[i]);
    for (const auto& p : splits)
      if (p[i] > b.lo[i] + slack && p[i] < b.hi[i] - slack) cuts[i].push_back(p[i]);
    cuts[i].push_back(b.hi[i]);
    std::sort(cuts[i].begin(), cuts[i].end());
    cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
  }
  std::vector<Box> out;
  std::array<std::size_t, kMaxDim> idx{};
  while (true) {
    Box c = b;
    for (int i = 0; i < b.dim; ++i) {
      c.lo[i] = cuts[i][idx[i]];
      c.hi[i] = cuts[i][idx[i] + 1];
    }
    out.push_back(c);
    int i = 0;
    for (; i < b.dim; ++i) {
      if (++idx[i] + 1 < cuts[i].size()) break;
      idx[i] = 0;
    }
    if (i == b.dim) break;
  }
  return out;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  static const std::array<GaussLegendre, kMaxOrder + 1> table = [] {
    std::array<GaussLegendre, kMaxOrder + 1> t;
    for (int m = 1; m <= kMaxOrder; ++m) t[m] = compute_gauss_legendre(m);
    return t;
  }();
  if (order < 1 || order > kMaxOrder)
    throw InvalidInput("Gauss-Legendre order must be in [1, 32]");
  return table[order];
}

void IntegrationPlan::validate() const {
  if (!(rel_tol > 0.0)) throw InvalidInput("integration tolerance must be positive");
  if (max_depth < 0) throw InvalidInput("integration depth must be non-negative");
  if (order < 1 || order > kMaxOrder) throw InvalidInput("Gauss-Legendre order must be in [1, 32]");
  if (min_layers < 3 || max_layers < min_layers)
    throw InvalidInput("singular layers need 3 <= min_layers <= max_layers");
}

IntegrationPlan IntegrationPlan::with_splits(const std::vector<Point>& extra) const {
  IntegrationPlan out = *this;
  out.split_points.insert(out.split_points.end(), extra.begin(), extra.end());
  return out;
}

IntegrationPlan IntegrationPlan::with_singularities(const std::vector<Point>& extra) const {
  IntegrationPlan out = *this;
  for (const auto& p : extra)
    if (std::find(out.singular_points.begin(), out.singular_points.end(), p) ==
        out.singular_points.end())
      out.singular_points.push_back(p);
  return out;
}

CubeRule::Result CubeRule::integrate(std::span<const double> values) const {
  Result r;
  double sum = 0.0;
  for (std::size_t i = 0; i < regular_count; ++i) sum += weights[i] * values[i];
  for (const auto& ch : chains) {
    const std::size_t layers = ch.layer_offsets.size() - 1;
    double prev = 0.0, last = 0.0, before = 0.0;
    for (std::size_t k = 0; k < layers; ++k) {
      double s = 0.0;
      for (std::size_t i = ch.layer_offsets[k]; i < ch.layer_offsets[k + 1]; ++i)
        s += weights[i] * values[i];
      sum += s;
      before = prev;
      prev = last;
      last = s;
    }
    (void)before;
    if (layers >= 2 && last != 0.0) {
      const double rho = prev == 0.0 ? std::numeric_limits<double>::infinity() : last / prev;
      r.worst_ratio = std::max(r.worst_ratio, rho);
      if (!(rho < kDivergentRatio)) {
        r.finite = false;
      } else if (rho > 0.0) {
        sum += last * rho / (1.0 - rho);
      }
    }
  }
  if (!std::isfinite(sum)) r.finite = false;
  r.value = r.finite ? sum : std::numeric_limits<double>::infinity();
  return r;
}

CubeRule::Result CubeRule::integrate(const ScalarFn& f) const {
  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = f(nodes[i]);
  return integrate(values);
}

RuleBuild build_rule(const ScalarFn& probe, const Box& box, const IntegrationPlan& plan) {
  plan.validate();
  check_dimension(box.dim);
  Builder b(probe, plan, box.dim);
  for (const auto& part : split_grid(box, plan.split_points)) b.piece(part, 0);
  RuleBuild out;
  out.rule = b.finish(&out.values);
  out.probe = out.rule.integrate(out.values);
  out.converged = b.converged;
  out.previous_estimate = b.previous;
  out.last_estimate = b.last;
  return out;
}

double integrate_box(const ScalarFn& f, const Box& box, const IntegrationPlan& plan) {
  const RuleBuild rb = build_rule(f, box, plan);
  if (!rb.probe.finite)
    throw InfiniteModular("integrand not integrable at a declared singular point",
                          rb.probe.worst_ratio);
  if (!rb.converged)
    throw QuadratureFailure("adaptive quadrature did not converge", rb.previous_estimate,
                            rb.last_estimate);
  return rb.probe.value;
}

double integrate_cube(const ScalarFn& f, const Cube& q, const IntegrationPlan& plan) {
  return integrate_box(f, q.box(), plan);
}

double harmonic_mean(const ExponentFunction& p, const Cube& q, const IntegrationPlan& plan) {
  if (p.is_constant()) return p.p_minus();
  const IntegrationPlan hp = plan.with_splits(p.breakpoints());
  const double avg = integrate_cube([&p](const Point& x) { return 1.0 / p(x); }, q, hp) /
                     q.measure();
  return 1.0 / avg;
}

LocalRange local_range(const ExponentFunction& p, const Cube& q, int points_per_axis) {
  if (p.is_constant()) return {p.p_minus(), p.p_plus()};
  const Box b = q.box();
  const int m = std::max(points_per_axis, 2);
  LocalRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::array<int, kMaxDim> idx{};
  std::size_t total = 1;
  for (int i = 0; i < q.dim(); ++i) total *= static_cast<std::size_t>(m);
  for (std::size_t k = 0; k < total; ++k) {
    Point x{};
    for (int i = 0; i < q.dim(); ++i)
      x[i] = b.lo[i] + (b.hi[i] - b.lo[i]) * idx[i] / static_cast<double>(m - 1);
    const double v = p(x);
    r.p_minus = std::min(r.p_minus, v);
    r.p_plus = std::max(r.p_plus, v);
    for (int i = 0; i < q.dim(); ++i) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  for (const auto& bp : p.breakpoints())
    if (b.contains(bp)) {
      r.p_minus = std::min(r.p_minus, p(bp));
      r.p_plus = std::max(r.p_plus, p(bp));
    }
  return r;
}

}  // namespace vexp
