#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace degen {

/// Base of every error raised by the library. The CLI maps each subclass to
/// its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class InvalidRegion : public Error {
 public:
  using Error::Error;
};

class InvalidShift : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Every failure found while validating a configuration.
class ConfigValidationError : public ConfigError {
 public:
  explicit ConfigValidationError(std::vector<std::string> failures)
      : ConfigError(join(failures)), failures_(std::move(failures)) {}

  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = std::to_string(items.size()) + " configuration failure(s)";
    for (const auto& item : items) out += "; " + item;
    return out;
  }
  std::vector<std::string> failures_;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual, int step = -1)
      : Error(what), last_residual_(last_residual), step_(step) {}

  double last_residual() const noexcept { return last_residual_; }
  /// Index of the failing time step, or -1 when raised by a single solve.
  int step() const noexcept { return step_; }

 private:
  double last_residual_;
  int step_;
};

}  // namespace degen
