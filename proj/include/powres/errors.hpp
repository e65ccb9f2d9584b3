#pragma once

#include <stdexcept>

namespace powres {

/// Raised when an internal consistency check fails. Never caught by the
/// library itself; seeing one means a bug (or a false theorem).
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Raised when a computation would exceed a configured size guard.
class GuardError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace powres
