#pragma once

#include <stdexcept>
#include <string>

namespace radhough {

/// Input outside the domain an operation is defined on (non-finite values,
/// points outside W, parameters outside the grid, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a precondition that is not about numeric ranges.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Evaluation hit a singular configuration (vanishing gradient, zero slope).
class SingularInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A candidate curve family is not in lambda_t-solvable form.
class SolvabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed PGM / CSV input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerics did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace radhough
