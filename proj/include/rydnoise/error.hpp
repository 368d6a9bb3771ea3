#pragma once

#include <stdexcept>
#include <string>

namespace rydnoise {

// Bad or inconsistent input data: missing quantum-defect series, negative
// rates, malformed config values. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parse failure with a 1-based line number into the offending file.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : ConfigError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Electric-dipole selection rules forbid the requested pair.
class SelectionRuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver or integrator failure. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The steady state is not unique (null space of dimension > 1).
class AmbiguousSteadyStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class VelocityGridError : public NumericalError {
 public:
  VelocityGridError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace rydnoise
