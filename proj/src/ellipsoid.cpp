#include "vexp/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace vexp {

MveeResult symmetric_mvee(const std::vector<Vec>& points, double tol, int max_iterations) {
  if (points.empty()) throw InvalidInput("MVEE needs points");
  const int d = static_cast<int>(points.front().size());
  const std::size_t m = points.size();
  std::vector<double> u(m, 1.0 / static_cast<double>(m));
  std::vector<double> omega(m);

  MveeResult out;
  Mat xinv;
  for (int it = 0;; ++it) {
    Mat x = Mat::Zero(d, d);
    for (std::size_t j = 0; j < m; ++j) x += u[j] * points[j] * points[j].transpose();
    Eigen::LDLT<Mat> ldlt(x);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
      throw EllipsoidFitError("sample directions do not span R^d", 0.0);
    xinv = ldlt.solve(Mat::Identity(d, d));
    std::size_t jp = 0, jm = m;
    for (std::size_t j = 0; j < m; ++j) {
      omega[j] = points[j].dot(xinv * points[j]);
      if (omega[j] > omega[jp]) jp = j;
      if (u[j] > 0.0 && (jm == m || omega[j] < omega[jm])) jm = j;
    }
    const double eps_plus = omega[jp] / d - 1.0;
    const double eps_minus = 1.0 - omega[jm] / d;
    out.iterations = it;
    out.gap = eps_plus;
    if ((eps_plus <= tol && eps_minus <= tol) || it >= max_iterations) break;

    std::size_t j;
    double alpha;
    if (eps_plus > eps_minus) {
      j = jp;
      alpha = (omega[j] - d) / (d * (omega[j] - 1.0));
    } else {
      j = jm;
      const double cap = -u[j] / (1.0 - u[j]);
      alpha = omega[j] > 1.0 ? std::max((omega[j] - d) / (d * (omega[j] - 1.0)), cap) : cap;
    }
    for (auto& v : u) v *= 1.0 - alpha;
    u[j] += alpha;
    if (u[j] < 1e-300) u[j] = 0.0;
  }
  out.shape = xinv / d;
  // Scale so every point is inside exactly.
  double worst = 0.0;
  for (const auto& b : points) worst = std::max(worst, b.dot(out.shape * b));
  out.shape /= worst;
  return out;
}

std::vector<Vec> direction_grid(int d, int m) {
  if (d < 1 || d > kMaxMatrixDim) throw InvalidInput("direction grid dimension out of range");
  std::vector<Vec> out;
  if (d == 1) {
    out.push_back(Vec::Ones(1));
    return out;
  }
  if (m < 2 * d) throw InvalidInput("too few directions");
  for (int j = 0; j < m; ++j) {
    Vec e(d);
    if (d == 2) {
      const double th = std::numbers::pi * j / m;
      e << std::cos(th), std::sin(th);
    } else {
      const double z = (j + 0.5) / m;
      const double rr = std::sqrt(1.0 - z * z);
      const double phi = j * std::numbers::pi * (3.0 - std::sqrt(5.0));
      e << rr * std::cos(phi), rr * std::sin(phi), z;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<Vec> random_directions(int d, int m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  while (static_cast<int>(out.size()) < m) {
    Vec e(d);
    for (int i = 0; i < d; ++i) {
      // Box-Muller.
      const double a = std::max(rng.uniform(), 1e-300), b = rng.uniform();
      e(i) = std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * std::numbers::pi * b);
    }
    const double len = e.norm();
    if (len > 1e-12) out.push_back(e / len);
  }
  return out;
}

double reduced_norm(const MatrixWeight& w, const ExponentFunction& p, const Cube& q,
                    const Vec& e, const NormOptions& opts) {
  const ScalarField f{[&w, e](const Point& x) { return (w(x) * e).norm(); }, w.singular_points(),
                      {}, std::nullopt};
  const double pq = harmonic_mean(p, q, opts.plan);
  return std::pow(q.measure(), -1.0 / pq) * luxemburg_norm(f, p, q, opts).value;
}

namespace {

// Distance between the lines through a and b.
double axis_distance(const Vec& a, const Vec& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

// Compass search on the sphere from e, step halved down to 1e-7.
double local_ascent(const std::function<double(const Vec&)>& g, Vec e, double best, double step) {
  const int d = static_cast<int>(e.size());
  while (step > 1e-7) {
    // Tangent basis at e.
    Eigen::HouseholderQR<Mat> qr(e);
    const Mat basis = qr.householderQ();
    bool moved = false;
    for (int k = 1; k < d && !moved; ++k)
      for (double sg : {1.0, -1.0}) {
        Vec c = (e + sg * step * basis.col(k)).normalized();
        const double v = g(c);
        if (v > best) {
          best = v;
          e = c;
          moved = true;
          break;
        }
      }
    if (!moved) step *= 0.5;
  }
  return best;
}

}  // namespace

ReducingOperator fit_norm_ellipsoid(const std::function<double(const Vec&)>& r, int d,
                                    const ReducingOptions& opts) {
  const int m = opts.directions > 0 ? opts.directions : (d == 2 ? 128 : 512);
  const auto dirs = direction_grid(d, m);
  std::vector<double> rv(dirs.size());
  std::vector<Vec> boundary;
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    rv[j] = r(dirs[j]);
    if (!(rv[j] > 0.0) || !std::isfinite(rv[j]))
      throw EllipsoidFitError("norm function not finite and positive in a sample direction", 0.0);
    boundary.push_back(dirs[j] / rv[j]);
  }

  ReducingOperator out;
  out.direction_samples = static_cast<int>(dirs.size());
  Mat s;
  double t;
  if (d == 1) {
    s = Mat::Identity(1, 1);
    t = rv[0];
  } else {
    const MveeResult mv = symmetric_mvee(boundary);
    Eigen::SelfAdjointEigenSolver<Mat> es(mv.shape);
    s = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
        es.eigenvectors().transpose();
    std::vector<double> f(dirs.size());
    for (std::size_t j = 0; j < dirs.size(); ++j) f[j] = rv[j] / (s * dirs[j]).norm();
    const auto ratio = [&](const Vec& e) { return r(e) / (s * e).norm(); };
    t = *std::max_element(f.begin(), f.end());

    // Sample spacing and local maxima of the ratio over the grid.
    double h = 0.0;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < dirs.size(); ++i)
        if (i != j) best = std::min(best, axis_distance(dirs[i], dirs[j]));
      h = std::max(h, best);
    }
    std::vector<std::pair<double, std::size_t>> peaks;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      bool is_max = true;
      for (std::size_t i = 0; i < dirs.size() && is_max; ++i)
        if (i != j && axis_distance(dirs[i], dirs[j]) <= 1.5 * h && f[i] > f[j]) is_max = false;
      if (is_max) peaks.push_back({f[j], j});
    }
    std::sort(peaks.rbegin(), peaks.rend());
    if (peaks.size() > 6) peaks.resize(6);
    for (const auto& [fj, j] : peaks) t = std::max(t, local_ascent(ratio, dirs[j], fj, h));
    // Covers the bisection tolerance of r.
    t *= 1.0 + 10.0 * opts.norm.tol;
  }
  out.matrix = t * s;

  std::vector<Vec> held = d == 1 ? std::vector<Vec>{Vec::Ones(1)}
                                 : random_directions(d, opts.held_out, opts.seed + 0x5eed);
  out.sandwich_factor = 0.0;
  out.lower_slack = 0.0;
  for (const auto& e : held) {
    const double re = r(e);
    const double fit = (out.matrix * e).norm();
    out.held_out.push_back(e);
    out.held_out_r.push_back(re);
    out.sandwich_factor = std::max(out.sandwich_factor, fit / re);
    out.lower_slack = std::max(out.lower_slack, re / fit);
  }
  const double bound = std::sqrt(static_cast<double>(d)) * (1.0 + opts.tol);
  if (out.sandwich_factor > bound)
    throw EllipsoidFitError("no ellipsoid within sqrt(d): held-out factor " +
                                std::to_string(out.sandwich_factor),
                            out.sandwich_factor);
  return out;
}

ReducingOperator reducing_operator(const MatrixWeight& w, const ExponentFunction& p,
                                   const Cube& q, const ReducingOptions& opts) {
  ReducingOperator out = fit_norm_ellipsoid(
      [&](const Vec& e) { return reduced_norm(w, p, q, e, opts.norm); }, w.d(), opts);
  out.cube = q;
  return out;
}

}  // namespace vexp
