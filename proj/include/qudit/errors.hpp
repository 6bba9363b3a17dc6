#pragma once

#include <stdexcept>
#include <string>

namespace qudit {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent caller input. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request whose computation could not be completed (exit code 1).
class ComputationError : public Error {
 public:
  using Error::Error;
};

class InvalidDimension : public InputError {
 public:
  using InputError::InputError;
};

class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatch : public InputError {
 public:
  using InputError::InputError;
};

class IndexOutOfRange : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateState : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class RankError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NonUnitary : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NonCyclicPath : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class UndersampledPath : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class UndefinedOverlapPhase : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class InconsistentSurface : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NumericalError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// Refinement failed to reach tolerance. Carries the last estimate so callers
/// can still report it.
class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double last_delta)
      : ComputationError(what), best_estimate_(best_estimate), last_delta_(last_delta) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double last_delta() const noexcept { return last_delta_; }

 private:
  double best_estimate_;
  double last_delta_;
};

}  // namespace qudit
