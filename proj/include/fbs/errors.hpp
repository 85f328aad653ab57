#pragma once

#include <stdexcept>
#include <string>

namespace fbs {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed caller input: dimension mismatch, value outside its stated domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// An operator/function/set specification that is inconsistent with itself
// (e.g. a modulus exceeding the Lipschitz constant, an empty box).
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

// Parameters that make an otherwise valid operation undefined,
// e.g. a resolvent with 1 + lambda*mu_A <= 0 or a singular prox system.
class IllPosedParameterError : public Error {
 public:
  using Error::Error;
};

// Output of a user-supplied operator was not finite.
class OperatorEvaluationError : public Error {
 public:
  using Error::Error;
};

// An iterative routine exhausted its budget; carries the last residual.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& msg, double last_residual)
      : Error(msg), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// A problem-class assumption ((A1)/(A2), lambda window) failed with
// enforcement turned on.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

// kappa1 outside the admissible (1 - eps(delta), 1) window; carries the window.
class WindowError : public Error {
 public:
  WindowError(const std::string& msg, double lo, double hi)
      : Error(msg), lo_(lo), hi_(hi) {}
  double window_lo() const { return lo_; }
  double window_hi() const { return hi_; }

 private:
  double lo_, hi_;
};

}  // namespace fbs
