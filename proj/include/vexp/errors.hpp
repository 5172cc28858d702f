#pragma once

#include <stdexcept>
#include <string>

namespace vexp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected construction or precondition violation.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature hit its depth limit without meeting tolerance.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double previous, double last)
      : Error(what), previous_estimate(previous), last_estimate(last) {}
  double previous_estimate;
  double last_estimate;
};

// Integrand is not integrable at a declared singular point.
class InfiniteModular : public Error {
 public:
  InfiniteModular(const std::string& what, double ratio)
      : Error(what), layer_ratio(ratio) {}
  // Ratio of consecutive geometric-layer contributions; >= 1 means divergence.
  double layer_ratio;
};

class NotInSpace : public Error {
 public:
  using Error::Error;
};

class UnboundedConjugate : public Error {
 public:
  using Error::Error;
};

class NoCertificate : public Error {
 public:
  using Error::Error;
};

class EllipsoidFitError : public Error {
 public:
  EllipsoidFitError(const std::string& what, double factor)
      : Error(what), worst_factor(factor) {}
  double worst_factor;
};

}  // namespace vexp
