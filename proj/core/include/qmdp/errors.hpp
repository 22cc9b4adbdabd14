#pragma once

#include <stdexcept>
#include <string>

namespace qmdp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed a value outside an operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A wealth space, MDP or problem file is inconsistent or unsupported.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A solver precondition on the model does not hold (reward signs, horizon kind, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (atoms, enumerated policies) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Functional value iteration ran out of sweeps.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace qmdp
