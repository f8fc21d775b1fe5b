#pragma once

#include <stdexcept>
#include <string>

namespace mdecomp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: non-prime modulus, malformed set, violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input exceeds a configured search or magnitude limit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Exact rational arithmetic left the 64-bit range.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

/// A result failed its exact re-check. Indicates a bug or a falsified claim.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mdecomp
