#pragma once

#include <stdexcept>
#include <string>

namespace cvdj {

/// Thrown when a closed form is requested outside the regime it was derived
/// for, e.g. a Gaussian register that does not fit inside [-T, T].
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity has no finite value (or no unique limit) at the requested point.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The measurement statistics do not depend on the parameter being estimated.
class UnidentifiableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach the requested tolerance. Carries the best
/// estimate obtained so it can still be reported.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace cvdj
