#pragma once

#include <stdexcept>
#include <string>

namespace corner {

// Invalid construction parameters and malformed inputs.
struct ResolutionError : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct ParameterError  : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct DomainError     : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct DegreeError     : std::invalid_argument { using std::invalid_argument::invalid_argument; };
struct ConfigError     : std::invalid_argument { using std::invalid_argument::invalid_argument; };

// Numerical failures detected while running.
struct SupportError     : std::runtime_error { using std::runtime_error::runtime_error; };
struct MassError        : std::runtime_error { using std::runtime_error::runtime_error; };
struct PositivityError  : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegeneracyError  : std::runtime_error { using std::runtime_error::runtime_error; };
struct IntegrationError : std::runtime_error { using std::runtime_error::runtime_error; };
struct EvalError        : std::runtime_error { using std::runtime_error::runtime_error; };

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t offset_)
      : std::runtime_error(what), offset(offset_) {}
};

}  // namespace corner
