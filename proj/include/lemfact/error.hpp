#pragma once

#include <stdexcept>
#include <string>

namespace lemfact {

/// Base class for every error raised by the library. The CLI maps all of
/// these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or precondition-violating input.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A configured size bound (group order, enumeration size, discriminant
/// magnitude) would be exceeded.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic would leave the 64-bit range.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// The counting formula produced a non-integral value.
class CountingInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace lemfact
