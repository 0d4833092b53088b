#pragma once

#include <stdexcept>
#include <string>

namespace rmom {

/// A numerical operation was asked to leave its domain (log of a nonpositive
/// eigenvalue, antipodal sphere points, a pole of cot, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a precondition that is not a numerical accident, e.g. mixing
/// tangent vectors based at different points.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A DomainError raised inside an iteration loop, tagged with the iteration.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(const std::string& what, long iteration)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

}  // namespace rmom
