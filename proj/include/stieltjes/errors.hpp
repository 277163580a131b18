#pragma once

#include <stdexcept>
#include <string>

namespace stieltjes {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation point outside a function's domain.
struct DomainError : Error {
  using Error::Error;
};

// Structurally invalid value (bad breakpoint ordering, non-monotone data, ...).
struct ValidationError : Error {
  using Error::Error;
};

// Bad argument to an operation (interval with lo > hi, theta outside [0,1], ...).
struct ParameterError : Error {
  using Error::Error;
};

// Incompatible functions passed to a composition-style operation.
struct CompositionError : Error {
  using Error::Error;
};

// A verification identity's hypothesis fails; carries the offending level.
struct PreconditionError : Error {
  PreconditionError(const std::string& msg, double offending_level)
      : Error(msg), level(offending_level) {}
  double level;
};

}  // namespace stieltjes
