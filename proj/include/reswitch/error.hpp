#pragma once

#include <stdexcept>
#include <string>

namespace reswitch {

/// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Interest rate at or below -100%, or an otherwise inadmissible argument range.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroPolynomial : public Error {
 public:
  using Error::Error;
};

class HorizonMismatch : public Error {
 public:
  using Error::Error;
};

/// Two techniques with the same (padded) labor profile have no switch points:
/// their cost difference vanishes everywhere.
class IdenticalTechniques : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class NotAggregable : public Error {
 public:
  using Error::Error;
};

class NonScalarComplement : public Error {
 public:
  using Error::Error;
};

class NoRoot : public Error {
 public:
  using Error::Error;
};

class PreconditionUnmet : public Error {
 public:
  using Error::Error;
};

/// Malformed technique, technology set, or model file.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

/// A string that should hold a number did not.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace reswitch
