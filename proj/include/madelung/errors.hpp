#pragma once

#include <stdexcept>

namespace madelung {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A scenario name or file could not be resolved.
class UnknownScenario : public Error {
 public:
  using Error::Error;
};

}  // namespace madelung
