#pragma once

#include <optional>
#include <string>

#include "sdm1/model.hpp"

namespace sdm1 {

/// One ingested dataset row.
struct CurveRecord {
    std::string timestamp;               // opaque text, not range-validated
    std::optional<double> irradiance;    // W/m^2
    std::optional<double> t_module_k;    // kelvin
    CardinalPoints cardinal{};
    double u_isc_pct = 0.0;
    double u_voc_pct = 0.0;
    double u_imp_pct = 0.0;
    double u_vmp_pct = 0.0;
    long source_line = 0;
};

}  // namespace sdm1
