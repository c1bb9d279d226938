#pragma once

#include <stdexcept>
#include <string>

namespace divergia {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// A call violated an operation's precondition (wrong domain, x outside I, ...).
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

/// A numeric parameter lies outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "parameter"; }
};

/// A construction could not be carried out (nesting broken, image escapes I, ...).
class ConstructionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "construction"; }
};

}  // namespace divergia
