#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>

#include "sdm1/errors.hpp"

namespace sdm1 {

/// A sign-changing interval [lo, hi] with the function values at both ends.
struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

/// Evaluates f at lo and hi and validates the bracket invariants.
/// Throws NoSignChange if f_lo and f_hi have the same strict sign,
/// NonFiniteEval if either endpoint value is not finite.
Bracket make_bracket(const std::function<double(double)>& f, double lo, double hi);

struct RootConfig {
    double abs_tol_x = 1e-12;
    double rel_tol_x = 1e-12;
    double abs_tol_f = 1e-12;
    int max_iter = 200;
};

struct RootResult {
    double x;
    double f_x;
    int iterations;
    bool converged;  // false when max_iter was exhausted first
};

/// Brent-style bracketed root finder: inverse-quadratic/secant steps with a
/// bisection safeguard whenever an interpolation step would leave the
/// bracket. Never evaluates f outside [lo, hi]. Terminates when
/// |f(x)| <= abs_tol_f or the bracket width falls below
/// abs_tol_x + rel_tol_x*|x|. Exhausting max_iter returns the best estimate
/// with converged = false.
RootResult find_root_bracketed(const std::function<double(double)>& f,
                               Bracket bracket, const RootConfig& cfg = {});

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when
/// the best pivot magnitude drops below 1e-300.
Vec3 solve_linear_3x3(Mat3 m, Vec3 b);

/// A sum represented as value * exp(scale), keeping the stored value finite.
struct ScaledSum {
    double value;
    double scale;
};

/// Computes sum_i weights[i]*exp(exponents[i]) with the largest exponent
/// factored out: returns (s, m) where m = max(exponents) and
/// s = sum_i weights[i]*exp(exponents[i] - m). Throws ValidationError on
/// empty or mismatched inputs or non-finite entries.
ScaledSum exp_rescaled(std::span<const double> exponents,
                       std::span<const double> weights);

/// Number of sign changes of f over n uniform segments of [lo, hi].
/// Used by bracketing scans to detect root multiplicity.
int count_sign_changes(const std::function<double(double)>& f, double lo,
                       double hi, int segments);

}  // namespace sdm1
