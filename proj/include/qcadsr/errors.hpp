#pragma once

#include <stdexcept>
#include <string>

namespace qcadsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates the documented precondition of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The nonlinear map D is evaluated at its singular set (k = +-pi/2).
class SingularPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Inverse map asked for a point outside its range (|E cos k| > 1).
class OutOfRangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The invariant measure density diverges at the requested wave-vector.
class DivergentMeasureError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A Jacobian or linearisation is requested too close to a fixed point.
class NearSingularError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Packet support crosses a fixed point or region boundary.
class SupportError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Numerical post-processing failures (peak fitting, intersections).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParallelTrajectoriesError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MultiPeakError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class WrapAroundError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Invalid experiment configuration. The message names the violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qcadsr
