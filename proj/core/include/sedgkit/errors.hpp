#pragma once

#include <stdexcept>
#include <string>

namespace sedgkit {

/// Bad argument or non-finite input. Maps to CLI exit code 2.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested operation is not defined for this model or scheme.
class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A field evaluation produced NaN or infinity.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-point iteration did not reach tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

} // namespace sedgkit
