#include "sdm1/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sdm1 {

namespace {

double checked_eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "function returned non-finite value " << v << " at x = " << x;
        throw NonFiniteEval(msg.str());
    }
    return v;
}

void validate_bracket(const Bracket& br) {
    if (!(br.lo < br.hi)) {
        throw NoSignChange("bracket requires lo < hi");
    }
    if (!std::isfinite(br.f_lo) || !std::isfinite(br.f_hi)) {
        throw NonFiniteEval("bracket endpoint values must be finite");
    }
    if (br.f_lo * br.f_hi > 0.0) {
        std::ostringstream msg;
        msg << "no sign change on [" << br.lo << ", " << br.hi << "]: f(lo) = "
            << br.f_lo << ", f(hi) = " << br.f_hi;
        throw NoSignChange(msg.str());
    }
}

}  // namespace

Bracket make_bracket(const std::function<double(double)>& f, double lo, double hi) {
    Bracket br{lo, hi, checked_eval(f, lo), checked_eval(f, hi)};
    validate_bracket(br);
    return br;
}

RootResult find_root_bracketed(const std::function<double(double)>& f,
                               Bracket bracket, const RootConfig& cfg) {
    validate_bracket(bracket);
    if (bracket.f_lo == 0.0) return {bracket.lo, 0.0, 0, true};
    if (bracket.f_hi == 0.0) return {bracket.hi, 0.0, 0, true};

    // Brent: b is the current best, c the counterpoint bracketing the root,
    // a the previous iterate.
    double a = bracket.lo, b = bracket.hi, c = bracket.hi;
    double fa = bracket.f_lo, fb = bracket.f_hi, fc = bracket.f_hi;
    double d = 0.0, e = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            2.0 * eps * std::abs(b) + 0.5 * (cfg.abs_tol_x + cfg.rel_tol_x * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(fb) <= cfg.abs_tol_f || std::abs(xm) <= tol1) {
            return {b, fb, iter, true};
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic interpolation, secant when a == c
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                // interpolation would leave the bracket or converge too
                // slowly; bisect
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if (std::abs(d) > tol1) {
            b += d;
        } else {
            b += (xm > 0.0 ? tol1 : -tol1);
        }
        fb = checked_eval(f, b);
    }
    return {b, fb, cfg.max_iter, false};
}

Vec3 solve_linear_3x3(Mat3 m, Vec3 b) {
    constexpr double pivot_floor = 1e-300;
    std::array<int, 3> perm{0, 1, 2};

    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(m[perm[row]][col]) > std::abs(m[perm[best]][col])) best = row;
        }
        std::swap(perm[col], perm[best]);
        const double pivot = m[perm[col]][col];
        if (std::abs(pivot) < pivot_floor) {
            throw SingularMatrix("pivot magnitude below 1e-300 at column " +
                                 std::to_string(col));
        }
        for (int row = col + 1; row < 3; ++row) {
            const double factor = m[perm[row]][col] / pivot;
            m[perm[row]][col] = 0.0;
            for (int k = col + 1; k < 3; ++k) {
                m[perm[row]][k] -= factor * m[perm[col]][k];
            }
            b[perm[row]] -= factor * b[perm[col]];
        }
    }

    Vec3 x{};
    for (int row = 2; row >= 0; --row) {
        double acc = b[perm[row]];
        for (int k = row + 1; k < 3; ++k) acc -= m[perm[row]][k] * x[k];
        x[row] = acc / m[perm[row]][row];
    }
    return x;
}

ScaledSum exp_rescaled(std::span<const double> exponents,
                       std::span<const double> weights) {
    if (exponents.empty() || exponents.size() != weights.size()) {
        throw ValidationError("exp_rescaled requires equal nonzero lengths");
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double e : exponents) {
        if (!std::isfinite(e)) throw ValidationError("non-finite exponent");
        m = std::max(m, e);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (!std::isfinite(weights[i])) throw ValidationError("non-finite weight");
        s += weights[i] * std::exp(exponents[i] - m);
    }
    return {s, m};
}

int count_sign_changes(const std::function<double(double)>& f, double lo,
                       double hi, int segments) {
    int changes = 0;
    int last_sign = 0;
    for (int i = 0; i <= segments; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / segments;
        const double v = f(x);
        const int sign = (v > 0.0) - (v < 0.0);
        if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) ++changes;
            last_sign = sign;
        }
    }
    return changes;
}

}  // namespace sdm1
