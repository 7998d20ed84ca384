#pragma once

#include <stdexcept>
#include <string>

namespace gpvw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad grid, out-of-range speed, ...).
class InputError : public Error {
public:
    using Error::Error;
};

/// A quantity needed by an audit lies outside its meaningful range.
class RangeError : public InputError {
public:
    using InputError::InputError;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// A converged field does not have the expected vortex content.
class TopologyError : public Error {
public:
    using Error::Error;
};

/// The fixed-momentum constraint drifted beyond tolerance.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Malformed snapshot, CSV or config file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// The modulus vanishes (or nearly so) on a degree-sampling circle.
class VortexOnCircleError : public Error {
public:
    using Error::Error;
};

/// The sampled phase increment is too far from a multiple of 2*pi.
class IllConditionedDegreeError : public Error {
public:
    using Error::Error;
};

}  // namespace gpvw
