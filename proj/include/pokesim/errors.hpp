#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pokesim {

/// Invalid physical input (non-positive capacitance, missing element, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration file problems. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// The eigensolver exhausted its restarts. Carries the best residuals seen.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, std::vector<double> best_residuals = {})
      : std::runtime_error(message), best_residuals_(std::move(best_residuals)) {}
  const std::vector<double>& best_residuals() const { return best_residuals_; }

 private:
  std::vector<double> best_residuals_;
};

/// No state in the solved window is localised in one of the two wells.
class IdentificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pokesim
