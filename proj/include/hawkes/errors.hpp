#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hawkes {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct InputError : Error {
    using Error::Error;
};

// File missing, unreadable or unwritable.
struct IoError : Error {
    using Error::Error;
};

struct ModelError : Error {
    using Error::Error;
};

// alpha * ||h||_1 >= 1
struct StabilityViolation : ModelError {
    using ModelError::ModelError;
};

// Monotonicity, positivity or integrability requirement failed.
struct AssumptionViolation : ModelError {
    using ModelError::ModelError;
};

// Kernel family is mathematically admissible but cannot be simulated exactly
// (e.g. h(0) = infinity).
struct UnsupportedKernel : ModelError {
    using ModelError::ModelError;
};

struct DegenerateVariance : Error {
    using Error::Error;
};

class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

// Realized intensity exceeded the thinning bound. Only possible when the
// monotonicity assumptions are broken, so it is a logic error.
struct ThinningBoundExceeded : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hawkes
