#pragma once

#include <stdexcept>
#include <string>

namespace latstab {

// Bad arguments: dimension out of range, a outside (0,1], mismatched lattices.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not deliver its contract (non-PD form, quadrature
// that did not converge, eigensolver failure).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by fixed-rule quadratures when the embedded error estimate exceeds
// the requested tolerance.
class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double achieved)
      : NumericError(what + " (achieved relative error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace latstab
