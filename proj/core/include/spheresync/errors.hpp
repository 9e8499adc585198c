#pragma once

#include <stdexcept>
#include <string>

namespace spheresync {

/// Base class for every exception thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible or out-of-contract dimensions.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A vector that must stay away from the origin fell below the zero guard.
class ZeroNormError : public Error {
public:
  ZeroNormError(const std::string& what, int agent = -1, double time = 0.0)
      : Error(what), agent_(agent), time_(time) {}

  /// Index of the offending agent, or -1 when not tied to an ensemble.
  int agent() const noexcept { return agent_; }
  double time() const noexcept { return time_; }

private:
  int agent_;
  double time_;
};

/// Equatorial coordinates left the open unit disc.
class OutOfDiscError : public Error {
public:
  using Error::Error;
};

/// Gnomonic chart applied to a point outside the open southern hemisphere.
class NotSouthernError : public Error {
public:
  using Error::Error;
};

/// Malformed configuration, schedule, or scenario input.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// The integrator could not continue (non-finite state, broken invariant).
class IntegrationError : public Error {
public:
  using Error::Error;
};

}  // namespace spheresync
