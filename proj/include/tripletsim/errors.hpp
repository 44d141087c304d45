#pragma once

#include <stdexcept>
#include <string>

namespace tripletsim {

// Invalid physical input or unsupported field combination.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed or inconsistent simulation configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical settings failed a convergence guard (CLI exit code 3).
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace tripletsim
