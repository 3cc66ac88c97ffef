#pragma once

#include <stdexcept>
#include <string>

namespace jostlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad grid, bad parameters, unparsable config.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its accuracy target
/// (ODE non-convergence, quadrature budget exhausted, eigensolver failure).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The input lies outside the hypotheses of the requested estimate,
/// e.g. a resonant potential handed to the non-resonant verification.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// |W(0)| fell inside the dead zone around the resonance threshold, so
/// neither the generic nor the resonant classification can be trusted.
class NearResonanceError : public HypothesisError {
public:
    NearResonanceError(const std::string& what, double w0_abs)
        : HypothesisError(what), w0_abs_(w0_abs) {}

    double w0_abs() const noexcept { return w0_abs_; }

private:
    double w0_abs_;
};

}  // namespace jostlab
