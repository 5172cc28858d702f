#include "vexp/matrix_weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vexp {

double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

MatrixWeight MatrixWeight::congruence(const Mat& a, std::vector<Weight> entries) {
  const int d = static_cast<int>(entries.size());
  if (d < 1 || d > kMaxMatrixDim) throw InvalidInput("matrix weight size must be in [1, 3]");
  if (a.rows() != d || a.cols() != d) throw InvalidInput("congruence matrix has wrong shape");
  if (!a.allFinite()) throw InvalidInput("congruence matrix has non-finite entries");
  Eigen::FullPivLU<Mat> lu(a);
  if (!lu.isInvertible()) throw InvalidInput("congruence matrix is singular");
  MatrixWeight w;
  w.a_ = a;
  w.a_inv_ = lu.inverse();
  w.entries_ = std::move(entries);
  return w;
}

MatrixWeight MatrixWeight::diagonal(std::vector<Weight> entries) {
  const int d = static_cast<int>(entries.size());
  return congruence(Mat::Identity(d, d), std::move(entries));
}

MatrixWeight MatrixWeight::scalar_identity(const Weight& w, int d) {
  return diagonal(std::vector<Weight>(static_cast<std::size_t>(d), w));
}

MatrixWeight MatrixWeight::constant(const Mat& w0) {
  if (w0.rows() != w0.cols() || w0.rows() < 1 || w0.rows() > kMaxMatrixDim)
    throw InvalidInput("constant matrix weight must be square with size in [1, 3]");
  if ((w0 - w0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + w0.cwiseAbs().maxCoeff()))
    throw InvalidInput("constant matrix weight must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(w0);
  const Vec ev = es.eigenvalues();
  std::vector<Weight> entries;
  for (int i = 0; i < ev.size(); ++i) {
    if (!(ev(i) > 0.0)) throw InvalidInput("constant matrix weight must be positive definite");
    entries.push_back(Weight::constant(ev(i)));
  }
  // w0 = V diag V^T = A^T diag A with A = V^T.
  return congruence(es.eigenvectors().transpose(), std::move(entries));
}

Mat MatrixWeight::operator()(const Point& x) const {
  const int n = d();
  Vec diag(n);
  for (int i = 0; i < n; ++i) diag(i) = entries_[i](x);
  return a_.transpose() * diag.asDiagonal() * a_;
}

Mat MatrixWeight::inverse_at(const Point& x) const {
  const int n = d();
  Vec diag(n);
  for (int i = 0; i < n; ++i) diag(i) = 1.0 / entries_[i](x);
  return a_inv_ * diag.asDiagonal() * a_inv_.transpose();
}

MatrixWeight MatrixWeight::inverse() const {
  std::vector<Weight> inv;
  for (const auto& w : entries_) inv.push_back(w.inverse());
  return congruence(a_inv_.transpose(), std::move(inv));
}

Weight MatrixWeight::direction_weight(const Vec& e) const {
  if (e.size() != d()) throw InvalidInput("direction has wrong size");
  if (d() == 1) return entries_[0].scaled(std::abs(e(0)) * a_(0, 0) * a_(0, 0));
  MatrixWeight self = *this;
  return Weight::custom([self, e](const Point& x) { return (self(x) * e).norm(); },
                        singular_points(), "|W e|");
}

std::vector<Point> MatrixWeight::singular_points() const {
  std::vector<Point> out;
  for (const auto& w : entries_)
    for (const auto& p : w.singular_points())
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

std::string MatrixWeight::label() const {
  std::ostringstream os;
  os << "A^T diag(";
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? ", " : "") << entries_[i].label();
  os << ") A";
  return os.str();
}

std::vector<std::string> MatrixWeight::validate(const std::vector<Point>& grid) const {
  std::vector<std::string> issues;
  for (const auto& x : grid) {
    const Mat m = (*this)(x);
    if (!m.allFinite()) continue;  // a declared singular point
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      issues.push_back("asymmetric matrix weight sample");
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (!(es.eigenvalues().minCoeff() > 0.0))
      issues.push_back("matrix weight not positive definite at a sample");
  }
  return issues;
}

ScalarField VectorField::magnitude() const {
  auto f = eval;
  return ScalarField{[f](const Point& x) { return f(x).norm(); }, singular_points, split_points,
                     std::nullopt};
}

VectorField VectorField::indicator(const Cube& sub, const Vec& e, double c) {
  const Box b = sub.box();
  const Vec v = c * e;
  return VectorField{[sub, v](const Point& x) -> Vec {
                       return sub.contains(x) ? v : Vec(Vec::Zero(v.size()));
                     },
                     {},
                     {b.lo, b.hi},
                     "indicator"};
}

}  // namespace vexp
