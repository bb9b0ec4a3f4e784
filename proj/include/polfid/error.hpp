#pragma once

#include <stdexcept>
#include <string>

namespace polfid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: out-of-range parameters, malformed configuration,
/// dimension mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A matrix that should be a density matrix is not one.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// An iterative or order-escalating computation did not settle. The last
/// iterate is kept so callers can still report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

}  // namespace polfid
