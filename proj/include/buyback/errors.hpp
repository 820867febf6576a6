#ifndef BUYBACK_ERRORS_HPP
#define BUYBACK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace buyback {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown ids, bad instance files, bad configs.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (e.g. dependent set passed as S).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Operation is not defined for this kind of set system.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// Exhaustive routine asked to run on a ground set that is too large.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Internal state was found inconsistent.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// A driven algorithm misbehaved (e.g. non-deterministic replay).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace buyback

#endif  // BUYBACK_ERRORS_HPP
