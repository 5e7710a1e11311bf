#pragma once

#include <stdexcept>
#include <string>

namespace symvqe {

// Bad configuration value or out-of-range model parameter.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an API precondition (mismatched sizes, repeated qubit, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numerical contract was broken (non-convergence, degeneracy, breakdown).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : NumericalError(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

// All overlap eigenvalues fell below the canonical-orthonormalization threshold.
class DegenerateSubspaceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// E0 and E1 of the subspace problem are too close for the eigenvector derivative.
class SpectralGapError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace symvqe
