#pragma once

#include <string>
#include <vector>

#include "sdm1/numerics.hpp"

namespace sdm1 {

namespace constants {
/// Exact SI values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;             // J/K
}  // namespace constants

/// The three measured anchor points of one I-V curve.
struct CardinalPoints {
    double i_sc;  // short-circuit current, A
    double v_oc;  // open-circuit voltage, V
    double i_mp;  // maximum-power current, A
    double v_mp;  // maximum-power voltage, V

    /// Validating constructor path; throws ValidationError naming the first
    /// violated invariant. Requires all four values positive, i_mp < i_sc,
    /// v_mp < v_oc, 2*i_mp > i_sc and 2*v_mp > v_oc (fill factor above 0.5,
    /// which every healthy silicon module satisfies).
    static CardinalPoints checked(double i_sc, double v_oc, double i_mp,
                                  double v_mp);
};

/// Throws ValidationError if cp violates any CardinalPoints invariant.
void validate(const CardinalPoints& cp);

/// The five parameters defining one modeled curve.
struct SdmParameters {
    double i_ph;  // photo-generated current, A
    double i_o;   // dark saturation current, A
    double a;     // equivalent diode factor, V
    double g_sh;  // shunt conductance, S
    double r_s;   // series resistance, ohm
};

struct ModuleMetadata {
    int n_s = 1;           // cells in series
    double t_pv = 298.15;  // module temperature, K
    std::string label;
};

struct IVPoint {
    double v_pv;
    double i_pv;
};

/// Shockley diode current i_o*(exp(v_j/a) - 1). Throws Overflow when
/// v_j/a > 700 (nonphysical input; the result would not fit a double).
double diode_current(double i_o, double v_j, double a);

/// Equivalent diode factor A = n*N_s*k_B*T_pv/q, in volts.
double equivalent_factor(double n, const ModuleMetadata& meta);

/// Implicit-equation residual at one point: with v_j = v_pv + r_s*i_pv,
/// returns i_o*(exp(v_j/a) - 1) + g_sh*v_j + i_pv - i_ph. Zero iff the
/// point lies on the modeled curve.
double sdm_residual(const SdmParameters& p, const IVPoint& point);

/// Inverts the implicit equation at fixed terminal voltage. The residual is
/// strictly increasing in i_pv, so the root in [-0.1*i_ph, 1.1*i_ph] is
/// unique; throws NoSolutionInBracket when v_pv lies outside the curve.
double solve_current_at_voltage(const SdmParameters& p, double v_pv,
                                const RootConfig& cfg = {});

/// The model's own open-circuit voltage: the root of I(v) = 0.
double open_circuit_voltage(const SdmParameters& p, const RootConfig& cfg = {});

/// Samples the curve at n_points uniformly spaced voltages from 0 to the
/// model's open-circuit voltage.
std::vector<IVPoint> sample_curve(const SdmParameters& p, int n_points,
                                  const RootConfig& cfg = {});

}  // namespace sdm1
