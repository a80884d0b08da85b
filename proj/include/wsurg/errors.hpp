#pragma once

#include <stdexcept>
#include <string>

namespace wsurg {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Process exit code the command-line front end maps this error to.
  virtual int exit_code() const noexcept { return 1; }
};

/// Malformed input: bad class expressions, violated preconditions, invalid keys.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The active vanishing policy cannot terminate a sum, or a file is inconsistent.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// No registry entry and no rule resolves the requested invariant.
class UnknownValue : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// An identity check or a reproduction table disagrees with its expected value.
class VerificationMismatch : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

}  // namespace wsurg
