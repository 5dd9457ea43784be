#pragma once

#include <stdexcept>
#include <string>

namespace pep {

// Two families: the physics says no (regime), or the arithmetic failed
// (numerical). The CLI maps them onto exit codes 2 and 3.

class PhysicsRegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter outside the domain of a closed form (e.g. squeezing parameter for Omega >= Delta).
class DomainError : public PhysicsRegimeError {
 public:
  using PhysicsRegimeError::PhysicsRegimeError;
};

/// Drive at or beyond the critical amplitude: the harmonic model has no steady state.
class NoSteadyStateError : public PhysicsRegimeError {
 public:
  using PhysicsRegimeError::PhysicsRegimeError;
};

/// Closed form that grows without bound in the requested regime.
class DivergenceError : public PhysicsRegimeError {
 public:
  using PhysicsRegimeError::PhysicsRegimeError;
};

/// Finite but above the reporting cap (1e9).
class UnboundedError : public PhysicsRegimeError {
 public:
  UnboundedError(const std::string& what, double value)
      : PhysicsRegimeError(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class DimensionError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class RangeError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class CapacityError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// Iterative method failed; carries the last residual it saw.
class ConvergenceError : public NumericalFailure {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalFailure(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularityError : public NumericalFailure {
 public:
  SingularityError(const std::string& what, double rcond)
      : NumericalFailure(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class StiffnessError : public NumericalFailure {
 public:
  StiffnessError(const std::string& what, double last_time)
      : NumericalFailure(what), last_time_(last_time) {}
  double last_time() const noexcept { return last_time_; }

 private:
  double last_time_;
};

class TruncationBreachError : public NumericalFailure {
 public:
  TruncationBreachError(const std::string& what, double time)
      : NumericalFailure(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

class PhysicalityError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class DegeneracyError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class WindowingError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class ResolutionError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class GridExtensionError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace pep
