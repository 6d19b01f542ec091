#pragma once

#include <stdexcept>
#include <string>

namespace rtnmpc {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mismatched or inconsistent matrix/vector dimensions.
struct DimensionError : Error {
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (e.g. T <= 0).
struct DomainError : Error {
  using Error::Error;
};

/// An iterative solver hit its iteration cap or diverged.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Singular KKT system or loss of the regularity needed by a solver.
struct RegularityError : Error {
  using Error::Error;
};

/// A stability certificate cannot be issued; the message names the
/// violated assumption (contraction, Lyapunov decrease, ...).
struct CertificationError : Error {
  using Error::Error;
};

/// Invalid or inconsistent problem configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// State blew up during simulation; carries the offending step index.
struct BlowUpError : Error {
  BlowUpError(const std::string& msg, long step_index)
      : Error(msg), step(step_index) {}
  long step;
};

}  // namespace rtnmpc
