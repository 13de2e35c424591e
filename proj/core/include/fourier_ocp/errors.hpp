#pragma once

#include <stdexcept>
#include <string>

namespace fourier_ocp {

/// Caller passed something structurally wrong: dimension mismatch, bad order,
/// non-positive horizon, unknown option.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric value is unusable: NaN/Inf sample, NaN coefficient, domain
/// violation inside an expression.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A solver or integrator failed while running (divergence, non-convergence).
class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration. Line and column are 1-based; 0 means
/// the problem is not tied to one location (e.g. a missing key).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    if (line <= 0) return what;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
  }

  int line_;
  int column_;
};

}  // namespace fourier_ocp
