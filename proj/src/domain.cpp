#include "sdm1/domain.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <sstream>

namespace sdm1 {

namespace {

void require_point(double a, double r_s) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw ValidationError("boundary functions require a > 0");
    }
    if (!(r_s >= 0.0) || !std::isfinite(r_s)) {
        throw ValidationError("boundary functions require r_s >= 0");
    }
}

struct AInterval {
    double lo;
    double hi;
};

AInterval initial_a_interval(const CardinalPoints& cp, const DomainOptions& opts) {
    return {opts.a_lo_frac * cp.v_oc, opts.a_hi_frac * cp.v_oc};
}

}  // namespace

ScaledSum f_sh_scaled(const CardinalPoints& cp, double a, double r_s) {
    require_point(a, r_s);
    const std::array<double, 3> exponents{
        cp.v_oc / a, (cp.v_mp + r_s * cp.i_mp) / a, (r_s * cp.i_mp) / a};
    const std::array<double, 3> weights{cp.i_sc - cp.i_mp, -cp.i_sc, cp.i_mp};
    return exp_rescaled(exponents, weights);
}

double f_sh(const CardinalPoints& cp, double a, double r_s) {
    return f_sh_scaled(cp, a, r_s).value;
}

ScaledSum f_mp_scaled(const CardinalPoints& cp, double a, double r_s) {
    require_point(a, r_s);
    const std::array<double, 3> exponents{
        cp.v_oc / a, (cp.v_mp + r_s * cp.i_mp) / a, (r_s * cp.i_sc) / a};
    const std::array<double, 3> weights{
        -a * cp.v_mp * (2.0 * cp.i_mp - cp.i_sc),
        (cp.v_oc * cp.i_mp + cp.v_mp * cp.i_sc - cp.v_oc * cp.i_sc) *
                (cp.v_mp - r_s * cp.i_mp) +
            a * (cp.v_oc * cp.i_mp - cp.v_mp * cp.i_sc),
        a * cp.i_mp * (2.0 * cp.v_mp - cp.v_oc)};
    return exp_rescaled(exponents, weights);
}

double f_mp(const CardinalPoints& cp, double a, double r_s) {
    return f_mp_scaled(cp, a, r_s).value;
}

namespace {

/// Smallest root in r_s of a rescaled boundary function over [0, r_s_ub].
/// Beyond r_s_ub = v_mp/i_mp the maximum-power voltage drop exceeds v_mp
/// itself, so larger values are nonphysical.
template <typename F>
BranchRoot branch_root(const CardinalPoints& cp, double a, F&& f,
                       const DomainOptions& opts) {
    const double r_s_ub = cp.v_mp / cp.i_mp;
    const int n = opts.rs_scan_segments;
    const auto eval = [&](double r) { return f(cp, a, r); };

    double prev_x = 0.0;
    double prev_f = eval(0.0);
    std::optional<Bracket> first;
    int sign_changes = 0;
    int last_sign = (prev_f > 0.0) - (prev_f < 0.0);
    if (prev_f == 0.0) return {0.0, 0, true};

    for (int i = 1; i <= n; ++i) {
        const double x = r_s_ub * static_cast<double>(i) / n;
        const double fx = eval(x);
        const int sign = (fx > 0.0) - (fx < 0.0);
        if (sign != 0 && last_sign != 0 && sign != last_sign) {
            ++sign_changes;
            if (!first) first = Bracket{prev_x, x, prev_f, fx};
        }
        if (sign == 0 && !first) first = Bracket{prev_x, x, prev_f, fx};
        if (sign != 0) last_sign = sign;
        prev_x = x;
        prev_f = fx;
    }
    if (!first) {
        std::ostringstream msg;
        msg << "no r_s root in [0, " << r_s_ub << "] at a = " << a;
        throw NoRootInRange(msg.str());
    }
    const RootResult res = find_root_bracketed(eval, *first, opts.root);
    return {res.x, sign_changes, res.converged};
}

}  // namespace

BranchRoot r_s_sh_root(const CardinalPoints& cp, double a,
                       const DomainOptions& opts) {
    return branch_root(
        cp, a, [](const CardinalPoints& c, double av, double r) { return f_sh(c, av, r); },
        opts);
}

BranchRoot r_s_mp_root(const CardinalPoints& cp, double a,
                       const DomainOptions& opts) {
    return branch_root(
        cp, a, [](const CardinalPoints& c, double av, double r) { return f_mp(c, av, r); },
        opts);
}

double r_s_sh_of_a(const CardinalPoints& cp, double a, const DomainOptions& opts) {
    return r_s_sh_root(cp, a, opts).r_s;
}

double r_s_mp_of_a(const CardinalPoints& cp, double a, const DomainOptions& opts) {
    return r_s_mp_root(cp, a, opts).r_s;
}

double a_at_zero_rs(const CardinalPoints& cp, const DomainOptions& opts) {
    AInterval range = initial_a_interval(cp, opts);
    const auto f = [&](double a) { return f_mp(cp, a, 0.0); };
    for (int attempt = 0; attempt <= opts.max_widen; ++attempt) {
        const int n = opts.a_scan_segments;
        double prev_x = range.lo;
        double prev_f = f(prev_x);
        for (int i = 1; i <= n; ++i) {
            const double x = range.lo + (range.hi - range.lo) * i / n;
            const double fx = f(x);
            if (prev_f == 0.0) return prev_x;
            if (prev_f * fx < 0.0) {
                return find_root_bracketed(f, Bracket{prev_x, x, prev_f, fx},
                                           opts.root)
                    .x;
            }
            prev_x = x;
            prev_f = fx;
        }
        range.lo /= opts.widen_factor;
        range.hi *= opts.widen_factor;
    }
    throw NoRootInRange("f_mp(a, 0) has no sign change in the widened search interval");
}

const char* to_string(SelectedRule rule) {
    return rule == SelectedRule::Intersection ? "intersection" : "mp-at-zero-rs";
}

namespace {

struct IntersectionResult {
    double a;
    double r_s;
    bool converged;
};

/// Finds the a at which the two branch curves cross, scanning the search
/// interval and treating a-values where either inner solve fails as outside
/// the branch.
std::optional<IntersectionResult> find_intersection(const CardinalPoints& cp,
                                                    const DomainOptions& opts) {
    const auto gap = [&](double a) -> std::optional<double> {
        try {
            return r_s_mp_of_a(cp, a, opts) - r_s_sh_of_a(cp, a, opts);
        } catch (const NoRootInRange&) {
            return std::nullopt;
        }
    };

    AInterval range = initial_a_interval(cp, opts);
    for (int attempt = 0; attempt <= opts.max_widen; ++attempt) {
        const int n = opts.a_scan_segments;
        std::optional<double> prev;
        double prev_x = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double x = range.lo + (range.hi - range.lo) * i / n;
            const std::optional<double> g = gap(x);
            if (prev && g && *prev * *g <= 0.0) {
                const auto g_checked = [&](double a) {
                    const std::optional<double> v = gap(a);
                    if (!v) throw NoRootInRange("branch vanished inside intersection bracket");
                    return *v;
                };
                const RootResult res = find_root_bracketed(
                    g_checked, Bracket{prev_x, x, *prev, *g}, opts.root);
                const BranchRoot at = r_s_mp_root(cp, res.x, opts);
                return IntersectionResult{res.x, at.r_s,
                                          res.converged && at.converged};
            }
            prev = g;
            prev_x = x;
        }
        range.lo /= opts.widen_factor;
        range.hi *= opts.widen_factor;
    }
    return std::nullopt;
}

}  // namespace

DomainResult compute_domain(const CardinalPoints& cp, const DomainOptions& opts) {
    validate(cp);

    std::optional<double> a_zero;
    try {
        a_zero = a_at_zero_rs(cp, opts);
    } catch (const NoRootInRange&) {
    }
    std::optional<IntersectionResult> crossing;
    try {
        crossing = find_intersection(cp, opts);
    } catch (const NoRootInRange&) {
    }

    if (!a_zero && !crossing) {
        throw DomainNotFound(
            "no bracket located for either feasibility rule; cardinal points "
            "are inconsistent with the model");
    }

    DomainResult out{};
    if (crossing && (!a_zero || crossing->a <= *a_zero)) {
        out.a_max = crossing->a;
        out.r_s_min = crossing->r_s;
        out.selected_rule = SelectedRule::Intersection;
        out.converged = crossing->converged;
    } else {
        out.a_max = *a_zero;
        out.r_s_min = 0.0;
        out.selected_rule = SelectedRule::MpAtZeroRs;
        out.converged = true;
    }
    out.f_sh_value = std::abs(f_sh(cp, out.a_max, out.r_s_min));
    out.f_mp_value = std::abs(f_mp(cp, out.a_max, out.r_s_min));
    return out;
}

SdmParameters reconstruct_parameters(const CardinalPoints& cp, double a,
                                     double r_s) {
    require_point(a, r_s);
    const double x_sc = r_s * cp.i_sc / a;
    const double x_mp = (cp.v_mp + r_s * cp.i_mp) / a;
    const double x_oc = cp.v_oc / a;
    if (std::max({x_sc, x_mp, x_oc}) > 700.0) {
        throw Overflow("cardinal-point exponent exceeds 700; a too small");
    }

    const Mat3 m{{{1.0, -std::expm1(x_sc), -(r_s * cp.i_sc)},
                  {1.0, -std::expm1(x_mp), -(cp.v_mp + r_s * cp.i_mp)},
                  {1.0, -std::expm1(x_oc), -cp.v_oc}}};
    const Vec3 rhs{cp.i_sc, cp.i_mp, 0.0};
    const Vec3 sol = solve_linear_3x3(m, rhs);

    SdmParameters p{sol[0], sol[1], a, sol[2], r_s};
    // Tolerate conductance rounding dust exactly on the feasibility
    // boundary, where the true g_sh is 0.
    const double g_sh_noise = 1e-12 * cp.i_sc / cp.v_oc;
    const auto reject = [&](const char* which) {
        std::ostringstream msg;
        msg << which << " is not positive at (a = " << a << ", r_s = " << r_s
            << "): i_ph = " << p.i_ph << ", i_o = " << p.i_o
            << ", g_sh = " << p.g_sh;
        throw NonPositiveParameters(msg.str(), p.i_ph, p.i_o, p.g_sh, a, r_s);
    };
    if (!(p.i_ph > 0.0)) reject("i_ph");
    if (!(p.i_o > 0.0)) reject("i_o");
    if (!(p.g_sh >= -g_sh_noise)) reject("g_sh");
    return p;
}

SdmParameters reduced_solution(const CardinalPoints& cp, double a,
                               const DomainOptions& opts) {
    return reconstruct_parameters(cp, a, r_s_mp_of_a(cp, a, opts));
}

}  // namespace sdm1
