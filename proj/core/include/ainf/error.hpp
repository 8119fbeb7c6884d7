#pragma once

#include <stdexcept>
#include <string>

namespace ainf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scalar, element or map data (bad rational, unknown basis name,
/// degree bookkeeping violated).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input list length does not match the arity of a map, or a slot index is
/// out of range.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// An element that must be homogeneous (or of a specific degree) is not.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// A structure checked under one sign convention was handed to an operation
/// that requires the other.
class ConventionError : public Error {
 public:
  using Error::Error;
};

/// A structure or morphism fails its defining equations.
class AxiomError : public Error {
 public:
  using Error::Error;
};

/// A cochain component would land above the arity cap.
class TruncationOverflow : public Error {
 public:
  using Error::Error;
};

/// An operation's hypothesis does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A time-dependent coefficient has a pole on the integration interval.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A time-dependent coefficient lies outside the closed-form family.
class FamilyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ainf
