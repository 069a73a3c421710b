#pragma once

#include <stdexcept>
#include <string>

namespace hclim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or input that violates a documented precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, degenerate sample, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Historical sample with no events; lambda-hat is zero and the log-link
/// intercept does not exist.
class AllZeroSample : public NumericalError {
 public:
  AllZeroSample() : NumericalError("all-zero sample") {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hclim
