#pragma once

#include <stdexcept>
#include <string>

namespace rpsteer {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Family parameter outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two-qubit matrix is not a valid real density operator.
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Conjugating operator is (numerically) singular or not positive definite.
class SingularY : public Error {
 public:
  using Error::Error;
};

/// Ellipse tilt is too close to (or above) 1 for the operator criterion.
class TiltTooLarge : public Error {
 public:
  using Error::Error;
};

class QuadratureDiverged : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Construction precondition violated (e.g. a direct model for a steerable state).
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Target operator lies outside the zonotope of the measure.
class NotInBox : public Error {
 public:
  using Error::Error;
};

}  // namespace rpsteer
