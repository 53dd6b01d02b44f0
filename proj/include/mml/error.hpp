#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mml {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Data that cannot support the model (zero variance, too few points).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

/// A set of segments that does not cover the data space.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A series or quadrature that failed to reach its accuracy target.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Optimizer gave up; carries the best point it found.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_point, double best_value)
      : Error(what), best_point_(std::move(best_point)), best_value_(best_value) {}

  const std::vector<double>& best_point() const noexcept { return best_point_; }
  double best_value() const noexcept { return best_value_; }

 private:
  std::vector<double> best_point_;
  double best_value_;
};

}  // namespace mml
