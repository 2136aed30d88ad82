// Licensed under the Apache License 2.0 (see LICENSE file).

#pragma once

#include <stdexcept>
#include <string>

namespace definetti {

enum class ErrorCode {
  invalid_argument = 1,
  quadrature_failure,
  divergent_integral,
  bisection_failure,
  invariant_violation,
  overflow,
  parse_error,
  iteration_limit,
};

/// Base of every exception thrown by the library. The C API maps `code()`
/// onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

/// A quadrature that did not reach its tolerance. Carries the best estimate
/// and the achieved error so callers can decide whether to accept it.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double estimate, double achieved_error)
      : Error(ErrorCode::quadrature_failure, what), estimate_(estimate), achieved_error_(achieved_error) {}
  double estimate() const noexcept { return estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double estimate_;
  double achieved_error_;
};

class DivergentIntegral : public Error {
 public:
  explicit DivergentIntegral(const std::string& what) : Error(ErrorCode::divergent_integral, what) {}
};

class BisectionFailure : public Error {
 public:
  explicit BisectionFailure(const std::string& what) : Error(ErrorCode::bisection_failure, what) {}
};

/// Raised when a computed quantity breaks one of the inequalities the
/// library asserts (sandwich bounds, Kolmogorov comparison, ...).
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(ErrorCode::invariant_violation, what) {}
};

class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error(ErrorCode::overflow, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::parse_error, what) {}
};

class IterationLimit : public Error {
 public:
  explicit IterationLimit(const std::string& what) : Error(ErrorCode::iteration_limit, what) {}
};

}  // namespace definetti
