#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdm1/domain.hpp"
#include "sdm1/record.hpp"

namespace sdm1 {

/// Cardinal points with absolute measurement half-widths.
struct UncertainCardinalPoints {
    CardinalPoints nominal{};
    double du_isc = 0.0;  // A
    double du_voc = 0.0;  // V
    double du_imp = 0.0;  // A
    double du_vmp = 0.0;  // V

    /// Throws ValidationError unless the half-widths are >= 0 and both the
    /// low and high realizations are themselves valid cardinal points.
    static UncertainCardinalPoints checked(const CardinalPoints& nominal,
                                           double du_isc, double du_voc,
                                           double du_imp, double du_vmp);
};

enum class Realization { Low, Nominal, High };

/// Low = nominal - half-widths, High = nominal + half-widths, componentwise.
CardinalPoints realize(const UncertainCardinalPoints& ucp, Realization which);

/// Feasibility-corner interval from the two endpoint realizations.
struct DomainInterval {
    DomainResult low;   // result for the Low realization
    DomainResult high;  // result for the High realization
    std::array<double, 2> a_max_interval;    // [min, max] over the endpoints
    std::array<double, 2> r_s_min_interval;  // [min, max] over the endpoints
};

/// Runs compute_domain on both endpoint realizations. A DomainNotFound from
/// either endpoint is rethrown tagged with the failing realization.
DomainInterval domain_interval(const UncertainCardinalPoints& ucp,
                               const DomainOptions& opts = {});

/// One corner of the 2^4 sign-combination analysis. signs[k] is -1 or +1
/// per variable in (i_sc, v_oc, i_mp, v_mp) order.
struct CornerResult {
    std::array<int, 4> signs;
    std::optional<DomainResult> result;
    std::string error;  // set when the corner failed validation or solving
};

/// Full corner analysis over all 16 sign combinations.
std::vector<CornerResult> corner_domains(const UncertainCardinalPoints& ucp,
                                         const DomainOptions& opts = {});

/// One row of the parameter band: the reduced solution under the Low and
/// High realizations at a shared diode factor. Rows outside either feasible
/// domain are marked infeasible instead of aborting the table.
struct BandRow {
    double a;
    std::optional<SdmParameters> low;
    std::optional<SdmParameters> high;
    std::string low_error;
    std::string high_error;
};

std::vector<BandRow> parameter_band(const UncertainCardinalPoints& ucp,
                                    std::span<const double> a_grid,
                                    const DomainOptions& opts = {});

struct VariableStats {
    double min;
    double mean;
    double max;
    double sd;  // population convention (divide by N)
};

struct UncertaintyStats {
    VariableStats isc;
    VariableStats voc;
    VariableStats imp;
    VariableStats vmp;
};

/// Single-pass summary of the per-row uncertainty percentages.
/// Throws EmptyInput on an empty range. This is the serial reference;
/// batch.hpp has the parallel kernel.
UncertaintyStats summarize_uncertainties(std::span<const CurveRecord> rows);

}  // namespace sdm1
