#pragma once

#include <stdexcept>
#include <string>

namespace pdmp {

/// Base class for all errors raised by the simulation library.
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

/// An argument outside the documented domain (t out of range, u outside (0,1), ...).
class DomainError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// A model violates one of its declared invariants (probabilities not summing
/// to one, missing analytic solution, unknown model id, ...).
class ModelError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// A single integration step failed (implicit stage solve did not converge).
class StepError : public SimulationError {
 public:
  StepError(const std::string& what, double t, double h, double residual)
      : SimulationError(what), t(t), h(h), residual(residual) {}
  double t;
  double h;
  double residual;
};

/// A numerical procedure failed beyond a single step (root find without a
/// bracket, non-monotone hazard iterates, ...).
class NumericalError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Trajectories passed to compare() cannot be paired jump-by-jump.
class PairingError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Too few usable points remain for an order fit after filtering.
class InsufficientDataError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// Invalid run configuration (CLI / config file level).
class ConfigError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace pdmp
