#pragma once

#include <stdexcept>
#include <string>

namespace tippetop {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters outside the regime required by the requested operation.
struct RegimeViolation : Error {
    using Error::Error;
};

// --- dynamics ---

struct NonPositiveDenominator : Error {
    NonPositiveDenominator() : Error("normal-force denominator is not positive (model breakdown)") {}
};

struct NegativeNormalForce : Error {
    NegativeNormalForce() : Error("normal force is negative (top leaves the surface)") {}
};

struct SinThetaUnderflow : Error {
    SinThetaUnderflow() : Error("sin(theta) below chart validity threshold") {}
};

struct StepSizeUnderflow : Error {
    StepSizeUnderflow() : Error("adaptive step size underflow") {}
};

// --- polynomials ---

struct NotSquareFree : Error {
    NotSquareFree() : Error("polynomial is not square-free") {}
};

// --- potential ---

struct PoleAtBoundary : Error {
    PoleAtBoundary() : Error("effective potential has a pole at z = +/-1") {}
};

struct NoSignChange : Error {
    NoSignChange() : Error("no sign change bracketing the potential minimum") {}
};

struct NonPositiveRHS : Error {
    NonPositiveRHS() : Error("right-hand side of the delta equation is not positive") {}
};

// --- nutation ---

struct BelowMinimum : Error {
    BelowMinimum() : Error("energy is below the potential minimum") {}
};

struct ComplexRoots : Error {
    ComplexRoots() : Error("companion quadratic has complex roots") {}
};

struct QuadratureNonConvergence : Error {
    QuadratureNonConvergence() : Error("period quadrature did not converge") {}
};

struct DegenerateB : Error {
    DegenerateB() : Error("parameter b vanishes") {}
};

struct DegenerateDenominator : Error {
    DegenerateDenominator() : Error("1 + w^2 + 2*w*z1 vanishes") {}
};

struct EpsilonTooLarge : Error {
    EpsilonTooLarge() : Error("epsilon = 2*beta/b^2 is not below 0.9") {}
};

struct WOutOfRange : Error {
    WOutOfRange() : Error("w = a/b outside [-0.9999, 0.9999]") {}
};

struct OutOfDomain : Error {
    using Error::Error;
    OutOfDomain() : Error("argument outside the valid domain") {}
};

} // namespace tippetop
