#pragma once

#include <stdexcept>
#include <string>

namespace genrank {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed input data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Requested sizes are inconsistent, e.g. a subsample larger than its pool.
class SizeError : public InputError {
 public:
  using InputError::InputError;
};

/// A computation left its numerical contract (non-finite value, negative
/// radicand beyond rounding noise, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A regression had too few usable points; carries how many survived.
class FitError : public Error {
 public:
  FitError(const std::string& what, int usable)
      : Error(what), usable_points(usable) {}
  int usable_points;
};

/// Filesystem or parsing failure; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace genrank
