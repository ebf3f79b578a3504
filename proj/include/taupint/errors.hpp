#pragma once

#include <stdexcept>
#include <string>

namespace taupint {

/// Raised when a dense materialization would exceed the configured row cap,
/// or a fast operator would exceed its memory budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by inverse applications when a diagonal factor is (numerically) zero.
class SingularOperatorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a construction invariant that the discretization guarantees is
/// violated; always indicates a bug upstream, never bad user input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace taupint
