#ifndef REFSCAT_ERRORS_HPP
#define REFSCAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace refscat {

// Bad arguments to a library call (sizes, non-unit directions, ...).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Input outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Input outside the supported numerical envelope.
struct RangeError : std::out_of_range {
    explicit RangeError(const std::string& msg) : std::out_of_range(msg) {}
};

// Inconsistent or degenerate geometry (negative radius, overlapping bodies, ...).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Scene or configuration failed validation.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver produced an unusable result (singular system, bad residual, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iteration or truncated expansion failed to reach its tolerance.
struct ConvergenceError : NumericalError {
    explicit ConvergenceError(const std::string& msg) : NumericalError(msg) {}
};

// Requested evaluation point sits where the discretization cannot deliver accuracy.
struct AccuracyError : NumericalError {
    explicit AccuracyError(const std::string& msg) : NumericalError(msg) {}
};

} // namespace refscat

#endif
