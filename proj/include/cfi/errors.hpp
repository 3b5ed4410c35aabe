#pragma once

#include <stdexcept>
#include <string>

namespace cfi {

/** \brief Base class of all errors raised by the library. */
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A density that is negative beyond tolerance or not normalisable.
class InvalidMeasure : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Measure combination the algorithm does not handle.
class UnsupportedMeasure : public Error {
public:
  using Error::Error;
};

/// Equilibrium density dips below zero, so the closed form does not apply.
class NotFullSupport : public Error {
public:
  using Error::Error;
};

/// Hypothesis of a theorem is not met by the supplied instance.
class PreconditionFailed : public Error {
public:
  using Error::Error;
};

/// Test function violates the Lipschitz constraint of a dual certificate.
class CertificateRejected : public Error {
public:
  using Error::Error;
};

} // namespace cfi
