#pragma once

#include <stdexcept>
#include <string>

namespace sik {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or schema-violating input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Matrix structure outside the supported normal-form cases.
class UnsupportedStructure : public Error {
 public:
  using Error::Error;
};

/// A floor/ceiling or crossing could not be certified at working precision.
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// A theorem-level consistency check failed (bad seed, broken identity).
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure failed to converge or stabilize.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sik
