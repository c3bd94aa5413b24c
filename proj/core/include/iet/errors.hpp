#pragma once

#include <stdexcept>
#include <string>

namespace iet {

/// Base of every error thrown by the library. `exit_code()` is what the
/// command-line tool returns when the error escapes a subcommand.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Malformed or out-of-contract input (bad text, reducible permutation,
/// non-positive length, violated precondition).
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class ReducibleError : public InputError {
 public:
  using InputError::InputError;
};

/// Rauzy induction is undefined when the two competing lengths coincide.
class TieError : public InputError {
 public:
  using InputError::InputError;
};

/// The orbit hit an interior breakpoint exactly (special flows, exact mode).
class DiscontinuityError : public InputError {
 public:
  using InputError::InputError;
};

/// An iteration, enumeration or population bound was exhausted.
class CapExceeded : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Floating-point precision ran out (ties or collapse in float mode).
class PrecisionError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// A computed identity that must hold by theory did not; signals a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace iet
