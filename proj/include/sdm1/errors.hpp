#pragma once

#include <stdexcept>
#include <string>

namespace sdm1 {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A domain-type invariant was violated at construction or realization.
struct ValidationError : Error {
    using Error::Error;
};

/// Root bracket endpoints do not enclose a sign change.
struct NoSignChange : Error {
    using Error::Error;
};

/// The target function returned NaN or infinity inside the bracket.
struct NonFiniteEval : Error {
    using Error::Error;
};

/// Pivot magnitude below threshold; degenerate linear system.
struct SingularMatrix : Error {
    using Error::Error;
};

/// Exponent too large for a finite double result.
struct Overflow : Error {
    using Error::Error;
};

/// No root of the boundary function inside the search range.
struct NoRootInRange : Error {
    using Error::Error;
};

/// The implicit-equation bracket contains no solution (voltage outside
/// the curve's physical range).
struct NoSolutionInBracket : Error {
    using Error::Error;
};

/// Neither feasibility rule produced a bracketed root.
struct DomainNotFound : Error {
    using Error::Error;
};

/// The linear solve succeeded but the resulting parameters are
/// infeasible; carries the raw values for inspection.
struct NonPositiveParameters : Error {
    double i_ph;
    double i_o;
    double g_sh;
    double a;
    double r_s;
    NonPositiveParameters(const std::string& what, double i_ph_, double i_o_,
                          double g_sh_, double a_, double r_s_)
        : Error(what), i_ph(i_ph_), i_o(i_o_), g_sh(g_sh_), a(a_), r_s(r_s_) {}
};

struct EmptyInput : Error {
    using Error::Error;
};

struct UnreadableInput : Error {
    using Error::Error;
};

/// Every data row has fewer columns than the mapping requires.
struct MappingMismatch : Error {
    using Error::Error;
};

struct SinkWriteFailure : Error {
    using Error::Error;
};

}  // namespace sdm1
