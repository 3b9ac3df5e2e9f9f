#pragma once

#include <stdexcept>
#include <string>

namespace unidos {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters or distribution specs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a precondition (window too small, size mismatch, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (z = 0, eps <= 0, A < 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure or a result violating a hard numerical invariant.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace unidos
