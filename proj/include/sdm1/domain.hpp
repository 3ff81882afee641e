#pragma once

#include "sdm1/model.hpp"
#include "sdm1/numerics.hpp"

namespace sdm1 {

/// Search controls for boundary-curve roots and the feasibility corner.
struct DomainOptions {
    /// Diode-factor search interval as fractions of v_oc, widened
    /// geometrically when no sign change is found.
    double a_lo_frac = 0.02;
    double a_hi_frac = 0.2;
    double widen_factor = 1.5;
    int max_widen = 5;
    int a_scan_segments = 96;
    int rs_scan_segments = 24;
    RootConfig root;
};

/// Shunt boundary function. Root in r_s at fixed a is the series resistance
/// at which the reconstructed shunt conductance vanishes. Evaluated with the
/// largest exponent factored out (see exp_rescaled); the returned value is
/// the rescaled one, so roots are unaffected and evaluation never overflows.
ScaledSum f_sh_scaled(const CardinalPoints& cp, double a, double r_s);
double f_sh(const CardinalPoints& cp, double a, double r_s);

/// Maximum-power boundary function: encodes dP/dV = 0 at the measured
/// maximum-power point. Rescaled exactly as f_sh.
ScaledSum f_mp_scaled(const CardinalPoints& cp, double a, double r_s);
double f_mp(const CardinalPoints& cp, double a, double r_s);

/// Root of a boundary function in r_s at fixed a, plus scan detail.
struct BranchRoot {
    double r_s;
    int sign_changes;  // over the full [0, r_s upper bound] scan
    bool converged;
};

/// Smallest root of f_sh(cp, a, .) on [0, v_mp/i_mp].
/// Throws NoRootInRange when a lies outside the branch.
double r_s_sh_of_a(const CardinalPoints& cp, double a,
                   const DomainOptions& opts = {});

/// Smallest root of f_mp(cp, a, .) on [0, v_mp/i_mp].
double r_s_mp_of_a(const CardinalPoints& cp, double a,
                   const DomainOptions& opts = {});

/// Scan-detail variants used by the domain computation and tests.
BranchRoot r_s_sh_root(const CardinalPoints& cp, double a,
                       const DomainOptions& opts = {});
BranchRoot r_s_mp_root(const CardinalPoints& cp, double a,
                       const DomainOptions& opts = {});

/// Root of f_mp(cp, a, 0) = 0 in a: the diode factor at which the
/// maximum-power branch reaches r_s = 0.
double a_at_zero_rs(const CardinalPoints& cp, const DomainOptions& opts = {});

enum class SelectedRule { Intersection, MpAtZeroRs };

const char* to_string(SelectedRule rule);

/// Feasible-domain boundary corner.
struct DomainResult {
    double a_max;    // V
    double r_s_min;  // ohm
    SelectedRule selected_rule;
    bool converged;
    double f_sh_value;  // rescaled |f_sh| at (a_max, r_s_min)
    double f_mp_value;  // rescaled |f_mp| at (a_max, r_s_min)
};

/// Computes the feasibility corner: a_max is the smaller of the
/// r_s = 0 root of f_mp and the a at which the two boundary curves
/// intersect; r_s_min is the maximum-power branch value there.
/// Throws DomainNotFound when neither rule yields a bracketed root.
DomainResult compute_domain(const CardinalPoints& cp,
                            const DomainOptions& opts = {});

/// Solves the 3x3 linear system obtained by anchoring the implicit model at
/// the three cardinal points, for unknowns (i_ph, i_o, g_sh) at given
/// (a, r_s). Throws SingularMatrix on degenerate geometry, Overflow when an
/// exponent exceeds 700, and NonPositiveParameters (carrying the raw
/// values) when the solution is infeasible.
SdmParameters reconstruct_parameters(const CardinalPoints& cp, double a,
                                     double r_s);

/// The one-parameter family: for admissible a, r_s comes from the
/// maximum-power branch and the remaining parameters from the linear solve.
SdmParameters reduced_solution(const CardinalPoints& cp, double a,
                               const DomainOptions& opts = {});

}  // namespace sdm1
