#pragma once

#include <stdexcept>
#include <string>

namespace appraise {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Iterative or factorization step did not reach the required accuracy.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A downdate would have left the matrix indefinite.
class PsdViolation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class UnsupportedPhi : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DataFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace appraise
