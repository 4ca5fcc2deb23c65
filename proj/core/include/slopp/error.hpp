#pragma once

#include <stdexcept>
#include <string>

namespace slopp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A circuit or vtree reference is invalid, or scopes do not line up.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Input data does not satisfy an operation's precondition (empty database,
/// arity or variable-set mismatch, enumeration limit exceeded).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace slopp
