#include "sdm1/model.hpp"

#include <cmath>
#include <sstream>

namespace sdm1 {

void validate(const CardinalPoints& cp) {
    const auto fail = [&](const char* what) {
        std::ostringstream msg;
        msg << "invalid cardinal points (" << what << "): i_sc = " << cp.i_sc
            << ", v_oc = " << cp.v_oc << ", i_mp = " << cp.i_mp
            << ", v_mp = " << cp.v_mp;
        throw ValidationError(msg.str());
    };
    if (!(std::isfinite(cp.i_sc) && std::isfinite(cp.v_oc) &&
          std::isfinite(cp.i_mp) && std::isfinite(cp.v_mp))) {
        fail("non-finite value");
    }
    if (!(cp.i_sc > 0.0 && cp.v_oc > 0.0 && cp.i_mp > 0.0 && cp.v_mp > 0.0)) {
        fail("all four values must be positive");
    }
    if (!(cp.i_mp < cp.i_sc)) fail("i_mp must be below i_sc");
    if (!(cp.v_mp < cp.v_oc)) fail("v_mp must be below v_oc");
    if (!(2.0 * cp.i_mp - cp.i_sc > 0.0)) fail("2*i_mp must exceed i_sc");
    if (!(2.0 * cp.v_mp - cp.v_oc > 0.0)) fail("2*v_mp must exceed v_oc");
}

CardinalPoints CardinalPoints::checked(double i_sc, double v_oc, double i_mp,
                                       double v_mp) {
    CardinalPoints cp{i_sc, v_oc, i_mp, v_mp};
    validate(cp);
    return cp;
}

double diode_current(double i_o, double v_j, double a) {
    const double arg = v_j / a;
    if (arg > 700.0) {
        std::ostringstream msg;
        msg << "diode exponent v_j/a = " << arg << " exceeds 700";
        throw Overflow(msg.str());
    }
    return i_o * std::expm1(arg);
}

double equivalent_factor(double n, const ModuleMetadata& meta) {
    return n * meta.n_s * constants::boltzmann * meta.t_pv /
           constants::elementary_charge;
}

double sdm_residual(const SdmParameters& p, const IVPoint& point) {
    const double v_j = point.v_pv + p.r_s * point.i_pv;
    return diode_current(p.i_o, v_j, p.a) + p.g_sh * v_j + point.i_pv - p.i_ph;
}

double solve_current_at_voltage(const SdmParameters& p, double v_pv,
                                const RootConfig& cfg) {
    const double lo = -0.1 * p.i_ph;
    const double hi = 1.1 * p.i_ph;
    const auto residual = [&](double i) {
        return sdm_residual(p, IVPoint{v_pv, i});
    };
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (f_lo * f_hi > 0.0) {
        std::ostringstream msg;
        msg << "no current solution in [" << lo << ", " << hi
            << "] A at v_pv = " << v_pv << " V";
        throw NoSolutionInBracket(msg.str());
    }
    return find_root_bracketed(residual, Bracket{lo, hi, f_lo, f_hi}, cfg).x;
}

double open_circuit_voltage(const SdmParameters& p, const RootConfig& cfg) {
    // At i = 0 the residual i_o*(exp(v/a) - 1) + g_sh*v - i_ph is strictly
    // increasing in v, negative at v = 0 and positive at the diode-only
    // bound a*log1p(i_ph/i_o).
    const double v_ub = p.a * std::log1p(p.i_ph / p.i_o) * (1.0 + 1e-12) +
                        1e-12;
    const auto residual = [&](double v) {
        return sdm_residual(p, IVPoint{v, 0.0});
    };
    const Bracket br = make_bracket(residual, 0.0, v_ub);
    return find_root_bracketed(residual, br, cfg).x;
}

std::vector<IVPoint> sample_curve(const SdmParameters& p, int n_points,
                                  const RootConfig& cfg) {
    if (n_points < 2) throw ValidationError("sample_curve requires n_points >= 2");
    const double v_oc = open_circuit_voltage(p, cfg);
    std::vector<IVPoint> points;
    points.reserve(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) {
        const double v = v_oc * static_cast<double>(k) / (n_points - 1);
        points.push_back(IVPoint{v, solve_current_at_voltage(p, v, cfg)});
    }
    return points;
}

}  // namespace sdm1
