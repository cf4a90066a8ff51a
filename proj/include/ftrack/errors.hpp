#pragma once

#include <stdexcept>
#include <string>

namespace ftrack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Breakpoints that are not strictly increasing or do not span the state interval.
class InvalidPartition : public Error {
 public:
  using Error::Error;
};

/// A state value outside [lower, upper].
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (non-finite variation, bad staircase, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Integral over the real line that does not converge (far fields differ).
class DivergentIntegral : public Error {
 public:
  using Error::Error;
};

/// Solver configuration that breaks a hard requirement, e.g. the CFL condition.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// No admissible interface trace pair was found.
class InfeasibleInterface : public Error {
 public:
  using Error::Error;
};

/// Front or collision cap exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Snapshot requested across a pending collision.
class StaleSample : public Error {
 public:
  using Error::Error;
};

}  // namespace ftrack
