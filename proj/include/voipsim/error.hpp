#pragma once

#include <stdexcept>
#include <string>

namespace voipsim {

/// Raised for malformed scenarios, bad parameters, or misuse that a user
/// can fix. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an internal consistency check fails (e.g. a packet delivered
/// twice). Indicates a bug, not bad input. The CLI maps this to exit code 2.
class InvariantViolation : public std::logic_error {
  public:
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

inline void invariant(bool condition, const char* message) {
    if (!condition) {
        throw InvariantViolation(message);
    }
}

}  // namespace voipsim
