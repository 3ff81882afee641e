#include "sdm1/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace sdm1 {

UncertainCardinalPoints UncertainCardinalPoints::checked(
    const CardinalPoints& nominal, double du_isc, double du_voc, double du_imp,
    double du_vmp) {
    validate(nominal);
    if (!(du_isc >= 0.0 && du_voc >= 0.0 && du_imp >= 0.0 && du_vmp >= 0.0)) {
        throw ValidationError("uncertainty half-widths must be >= 0");
    }
    UncertainCardinalPoints ucp{nominal, du_isc, du_voc, du_imp, du_vmp};
    realize(ucp, Realization::Low);
    realize(ucp, Realization::High);
    return ucp;
}

CardinalPoints realize(const UncertainCardinalPoints& ucp, Realization which) {
    if (which == Realization::Nominal) return ucp.nominal;
    const double s = which == Realization::Low ? -1.0 : 1.0;
    CardinalPoints cp{ucp.nominal.i_sc + s * ucp.du_isc,
                      ucp.nominal.v_oc + s * ucp.du_voc,
                      ucp.nominal.i_mp + s * ucp.du_imp,
                      ucp.nominal.v_mp + s * ucp.du_vmp};
    try {
        validate(cp);
    } catch (const ValidationError& err) {
        const char* name = which == Realization::Low ? "low" : "high";
        throw ValidationError(std::string(name) + " realization: " + err.what());
    }
    return cp;
}

DomainInterval domain_interval(const UncertainCardinalPoints& ucp,
                               const DomainOptions& opts) {
    DomainInterval out{};
    try {
        out.low = compute_domain(realize(ucp, Realization::Low), opts);
    } catch (const DomainNotFound& err) {
        throw DomainNotFound(std::string("low realization: ") + err.what());
    }
    try {
        out.high = compute_domain(realize(ucp, Realization::High), opts);
    } catch (const DomainNotFound& err) {
        throw DomainNotFound(std::string("high realization: ") + err.what());
    }
    out.a_max_interval = {std::min(out.low.a_max, out.high.a_max),
                          std::max(out.low.a_max, out.high.a_max)};
    out.r_s_min_interval = {std::min(out.low.r_s_min, out.high.r_s_min),
                            std::max(out.low.r_s_min, out.high.r_s_min)};
    return out;
}

std::vector<CornerResult> corner_domains(const UncertainCardinalPoints& ucp,
                                         const DomainOptions& opts) {
    std::vector<CornerResult> corners;
    corners.reserve(16);
    for (int mask = 0; mask < 16; ++mask) {
        CornerResult corner{};
        for (int k = 0; k < 4; ++k) corner.signs[k] = (mask >> k) & 1 ? 1 : -1;
        const CardinalPoints cp{
            ucp.nominal.i_sc + corner.signs[0] * ucp.du_isc,
            ucp.nominal.v_oc + corner.signs[1] * ucp.du_voc,
            ucp.nominal.i_mp + corner.signs[2] * ucp.du_imp,
            ucp.nominal.v_mp + corner.signs[3] * ucp.du_vmp};
        try {
            validate(cp);
            corner.result = compute_domain(cp, opts);
        } catch (const Error& err) {
            corner.error = err.what();
        }
        corners.push_back(std::move(corner));
    }
    return corners;
}

std::vector<BandRow> parameter_band(const UncertainCardinalPoints& ucp,
                                    std::span<const double> a_grid,
                                    const DomainOptions& opts) {
    const CardinalPoints low_cp = realize(ucp, Realization::Low);
    const CardinalPoints high_cp = realize(ucp, Realization::High);
    std::vector<BandRow> rows;
    rows.reserve(a_grid.size());
    for (double a : a_grid) {
        BandRow row{};
        row.a = a;
        try {
            row.low = reduced_solution(low_cp, a, opts);
        } catch (const Error& err) {
            row.low_error = err.what();
        }
        try {
            row.high = reduced_solution(high_cp, a, opts);
        } catch (const Error& err) {
            row.high_error = err.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

struct Welford {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    void add(double x) {
        if (n == 0) {
            lo = hi = x;
        } else {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        ++n;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    VariableStats stats() const {
        return {lo, mean, hi, std::sqrt(m2 / n)};
    }
};

}  // namespace

UncertaintyStats summarize_uncertainties(std::span<const CurveRecord> rows) {
    if (rows.empty()) throw EmptyInput("no records to summarize");
    Welford isc, voc, imp, vmp;
    for (const CurveRecord& rec : rows) {
        isc.add(rec.u_isc_pct);
        voc.add(rec.u_voc_pct);
        imp.add(rec.u_imp_pct);
        vmp.add(rec.u_vmp_pct);
    }
    return {isc.stats(), voc.stats(), imp.stats(), vmp.stats()};
}

}  // namespace sdm1
