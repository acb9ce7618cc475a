#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument does not hold (bad p, tau, sizes...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Signal mass reaches the grid edges, or a translated domain leaves the grid.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

/// An iterative or quadrature procedure failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Gradient requested at a point where the objective is not differentiable.
class NonSmoothPoint : public Error {
 public:
  using Error::Error;
};

/// Synthetic data contradicts a structural statement it should satisfy.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Scenario configuration that breaks the schema; carries every violation.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid config";
    for (const auto& e : v) s += "\n  " + e;
    return s;
  }
  std::vector<std::string> violations_;
};

}  // namespace psl
