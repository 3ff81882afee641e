#include "sdm1/batch.hpp"

#include <algorithm>
#include <cmath>

#include "sdm1/ingest.hpp"

namespace sdm1 {

namespace {

DomainRow domain_row(const CurveRecord& rec, const DomainOptions& opts) {
    DomainRow row{rec.source_line, rec.timestamp, std::nullopt, {}};
    try {
        row.result = compute_domain(rec.cardinal, opts);
    } catch (const Error& err) {
        row.error = err.what();
    }
    return row;
}

IntervalRow interval_row(const CurveRecord& rec, const DomainOptions& opts) {
    IntervalRow row{rec.source_line, rec.timestamp, std::nullopt, std::nullopt, {}};
    try {
        row.nominal = compute_domain(rec.cardinal, opts);
        row.interval = domain_interval(to_uncertain(rec), opts);
    } catch (const Error& err) {
        row.error = err.what();
    }
    return row;
}

}  // namespace

std::vector<DomainRow> compute_domains_serial(std::span<const CurveRecord> records,
                                              const DomainOptions& opts) {
    std::vector<DomainRow> rows(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        rows[i] = domain_row(records[i], opts);
    }
    return rows;
}

std::vector<DomainRow> compute_domains(std::span<const CurveRecord> records,
                                       const DomainOptions& opts) {
    std::vector<DomainRow> rows(records.size());
    const auto n = static_cast<long>(records.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] =
            domain_row(records[static_cast<std::size_t>(i)], opts);
    }
    return rows;
}

std::vector<IntervalRow> compute_intervals_serial(std::span<const CurveRecord> records,
                                                  const DomainOptions& opts) {
    std::vector<IntervalRow> rows(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        rows[i] = interval_row(records[i], opts);
    }
    return rows;
}

std::vector<IntervalRow> compute_intervals(std::span<const CurveRecord> records,
                                           const DomainOptions& opts) {
    std::vector<IntervalRow> rows(records.size());
    const auto n = static_cast<long>(records.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] =
            interval_row(records[static_cast<std::size_t>(i)], opts);
    }
    return rows;
}

namespace {

struct Partial {
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

    void merge(const Partial& other) {
        if (other.n == 0) return;
        if (n == 0) {
            *this = other;
            return;
        }
        lo = std::min(lo, other.lo);
        hi = std::max(hi, other.hi);
        const double delta = other.mean - mean;
        const long total = n + other.n;
        mean += delta * other.n / total;
        m2 += other.m2 + delta * delta * static_cast<double>(n) * other.n / total;
        n = total;
    }

    VariableStats stats() const { return {lo, mean, hi, std::sqrt(m2 / n)}; }
};

struct Partial4 {
    Partial isc, voc, imp, vmp;
};

}  // namespace

UncertaintyStats summarize_uncertainties_parallel(std::span<const CurveRecord> rows) {
    if (rows.empty()) throw EmptyInput("no records to summarize");

    // Fixed chunk layout so the merge order (and thus the result) is
    // independent of the thread count.
    constexpr std::size_t chunk_size = 4096;
    const std::size_t n_chunks = (rows.size() + chunk_size - 1) / chunk_size;
    std::vector<Partial4> partials(n_chunks);

    const auto nc = static_cast<long>(n_chunks);
#pragma omp parallel for schedule(static)
    for (long c = 0; c < nc; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * chunk_size;
        const std::size_t end = std::min(begin + chunk_size, rows.size());
        Partial4& part = partials[static_cast<std::size_t>(c)];
        for (std::size_t i = begin; i < end; ++i) {
            part.isc.add(rows[i].u_isc_pct);
            part.voc.add(rows[i].u_voc_pct);
            part.imp.add(rows[i].u_imp_pct);
            part.vmp.add(rows[i].u_vmp_pct);
        }
    }

    Partial4 total;
    for (const Partial4& part : partials) {
        total.isc.merge(part.isc);
        total.voc.merge(part.voc);
        total.imp.merge(part.imp);
        total.vmp.merge(part.vmp);
    }
    return {total.isc.stats(), total.voc.stats(), total.imp.stats(),
            total.vmp.stats()};
}

}  // namespace sdm1
