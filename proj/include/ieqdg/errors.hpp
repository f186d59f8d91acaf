// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace ieqdg {

/// Invalid configuration: bad counts, degenerate boxes, unknown keys, ...
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical failure in otherwise valid input (NaN at a node, non-positive error entry, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The quadratized potential left its admissible range (Phi(w)+B <= 0).
struct PotentialDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An API precondition was violated by the caller.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Linear solve did not reach the requested residual within budget.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, double best_residual_, int iterations_)
      : std::runtime_error(what), best_residual(best_residual_), iterations(iterations_) {}
  double best_residual;
  int iterations;
};

/// A run-level guarantee failed (energy increase, per-step identity violation).
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration of a baseline scheme did not converge.
struct IterationError : std::runtime_error {
  IterationError(const std::string& what, double last_change_)
      : std::runtime_error(what), last_change(last_change_) {}
  double last_change;
};

}  // namespace ieqdg
