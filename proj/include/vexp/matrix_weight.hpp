#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vexp/weight.hpp"

namespace vexp {

inline constexpr int kMaxMatrixDim = 3;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxMatrixDim, kMaxMatrixDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxMatrixDim, 1>;

// Largest singular value.
double op_norm(const Mat& m);

// W(x) = A^T diag(w_1(x), ..., w_d(x)) A with a constant invertible A and
// scalar weights w_i. Diagonal weights, constant SPD matrices, w I and
// congruences U^T D U are all of this form, and so is the inverse.
class MatrixWeight {
 public:
  static MatrixWeight diagonal(std::vector<Weight> entries);
  static MatrixWeight scalar_identity(const Weight& w, int d);
  static MatrixWeight constant(const Mat& w0);  // w0 symmetric positive definite
  static MatrixWeight congruence(const Mat& a, std::vector<Weight> entries);

  int d() const { return static_cast<int>(entries_.size()); }
  Mat operator()(const Point& x) const;
  Mat inverse_at(const Point& x) const;
  MatrixWeight inverse() const;

  // |W(.) e| as a scalar weight.
  Weight direction_weight(const Vec& e) const;
  std::vector<Point> singular_points() const;
  const Mat& congruence_matrix() const { return a_; }
  const std::vector<Weight>& entries() const { return entries_; }
  std::string label() const;

  // Sampled check: symmetry to 1e-12 and positive eigenvalues.
  std::vector<std::string> validate(const std::vector<Point>& grid) const;

 private:
  Mat a_;
  Mat a_inv_;
  std::vector<Weight> entries_;
};

// R^d-valued field with declared singular and split points.
struct VectorField {
  std::function<Vec(const Point&)> eval;
  std::vector<Point> singular_points;
  std::vector<Point> split_points;
  std::string label;

  Vec operator()(const Point& x) const { return eval(x); }
  // |f(.)| as a scalar field.
  ScalarField magnitude() const;

  // c e chi_Q'.
  static VectorField indicator(const Cube& sub, const Vec& e, double c = 1.0);
};

}  // namespace vexp
