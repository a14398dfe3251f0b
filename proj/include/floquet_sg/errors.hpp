#pragma once

#include <stdexcept>
#include <string>

namespace floquet_sg {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative scheme failed to reach its tolerance.  Carries the best
/// available estimate and the bound on its error.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_bound)
      : std::runtime_error(what),
        best_estimate(best_estimate),
        error_bound(error_bound) {}
  double best_estimate;
  double error_bound;
};

/// An a-posteriori accuracy certificate failed (result is not trustworthy
/// at the requested tolerance; retrying with a different tolerance may help).
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

/// A computed object violates a structural property it is known to have
/// (e.g. more than one open spectral gap); signals an integration failure.
class StructureError : public std::runtime_error {
 public:
  explicit StructureError(const std::string& what)
      : std::runtime_error(what) {}
};

/// A bracketing search could not be started or completed.
class SearchError : public std::runtime_error {
 public:
  explicit SearchError(const std::string& what) : std::runtime_error(what) {}
};

/// File output failure.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace floquet_sg
