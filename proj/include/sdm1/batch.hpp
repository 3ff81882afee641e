#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdm1/domain.hpp"
#include "sdm1/record.hpp"
#include "sdm1/uncertainty.hpp"

namespace sdm1 {

/// Per-record feasibility-corner outcome; failed rows carry the error
/// message instead of aborting the batch.
struct DomainRow {
    long source_line = 0;
    std::string timestamp;
    std::optional<DomainResult> result;
    std::string error;
};

struct IntervalRow {
    long source_line = 0;
    std::string timestamp;
    std::optional<DomainResult> nominal;
    std::optional<DomainInterval> interval;
    std::string error;
};

/// OpenMP-parallel per-row domain computation; output order matches input
/// order and each row's result is bit-identical to the serial reference.
std::vector<DomainRow> compute_domains(std::span<const CurveRecord> records,
                                       const DomainOptions& opts = {});
/// Serial reference implementation.
std::vector<DomainRow> compute_domains_serial(std::span<const CurveRecord> records,
                                              const DomainOptions& opts = {});

/// Per-row uncertainty propagation (low/high endpoints plus the nominal
/// corner), parallel and serial reference.
std::vector<IntervalRow> compute_intervals(std::span<const CurveRecord> records,
                                           const DomainOptions& opts = {});
std::vector<IntervalRow> compute_intervals_serial(std::span<const CurveRecord> records,
                                                  const DomainOptions& opts = {});

/// Chunked-parallel summary of the uncertainty percentages. Partial
/// aggregates are merged in fixed chunk order, so the result does not
/// depend on the thread count. Serial reference:
/// uncertainty.hpp summarize_uncertainties.
UncertaintyStats summarize_uncertainties_parallel(std::span<const CurveRecord> rows);

}  // namespace sdm1
