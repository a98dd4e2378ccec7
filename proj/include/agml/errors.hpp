#pragma once

#include <stdexcept>
#include <string>

namespace agml {

// Base for all recoverable failures raised by the library. Trial harnesses
// catch this to record a failed trial without aborting a battery.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Too few samples for the requested conditioning set, or a singular
// empirical submatrix that makes the estimate meaningless.
struct InsufficientSamplesError : Error {
    using Error::Error;
};

// An intermediate correlation hit +/-1, so the recursive update would divide
// by zero.
struct DegenerateCorrelationError : Error {
    using Error::Error;
};

// Subset enumeration would exceed the configured hard cap.
struct EnumerationCapError : Error {
    using Error::Error;
};

// Coordinate descent ran out of iterations before meeting the KKT tolerance.
struct LassoDivergenceError : Error {
    LassoDivergenceError(const std::string& msg, double residual)
        : Error(msg), kkt_residual(residual) {}
    double kkt_residual;
};

}  // namespace agml
