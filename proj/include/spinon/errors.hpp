#pragma once

#include <stdexcept>
#include <string>

namespace spinon {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A numerical procedure (quadrature, product, iteration) failed to reach
/// its tolerance. Carries the best estimate reached so far.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}

  double estimate() const noexcept { return estimate_; }
  double error() const noexcept { return error_; }

private:
  double estimate_;
  double error_;
};

/// Evaluation hit a singular point of a closed-form expression.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace spinon
