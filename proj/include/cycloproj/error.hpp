#pragma once

#include <stdexcept>
#include <string>

namespace cycloproj {

// Raised when a caller violates an operation's precondition (bad shape,
// out-of-range parameter, infeasible input).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an iterative method stops without meeting its tolerance.
// `residual` is the last measured residual of the method.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace cycloproj
