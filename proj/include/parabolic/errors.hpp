#pragma once

#include <stdexcept>
#include <string>

namespace parabolic {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value failed the invariant of its strong type (anti-Hermitian, unitary, tangent).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// The vertical frame at a tuple has lower rank than the effective torus.
class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Monomial degree does not match the top degree of the flag manifold.
class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

class NonRegularWeight : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace parabolic
