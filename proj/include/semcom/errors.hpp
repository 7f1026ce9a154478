#pragma once

#include <stdexcept>
#include <string>

namespace semcom {

/// Shape mismatch, bad length or any other violated argument contract.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was requested in the wrong lifecycle state.
class StateError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Input shorter than a single analysis frame.
class TooShortError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Power normalization of an all-zero vector.
class DegeneratePowerError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Transmit called with a symbol vector that is not unit-power.
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Zero-forcing against a (near) zero channel coefficient.
class NearSingularChannelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Error rate requested against an empty reference.
class UndefinedRateError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Training produced a non-finite loss.
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace semcom
