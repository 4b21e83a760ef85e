#pragma once

#include <stdexcept>
#include <string>

namespace navslip {

/// Base of every error raised by the library. The CLI maps ConfigError to
/// exit code 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point or field lies outside the region an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace navslip
