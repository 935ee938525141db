#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pathwise {

/// Precondition violated: off-grid point, level mismatch, index out of range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance. Carries the defect
/// history when one exists (Picard sweeps, shooting iterations).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::vector<double> trace = {})
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace pathwise
