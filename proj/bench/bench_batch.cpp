// Self-contained timing comparison of the serial reference kernels against
// the OpenMP ones, on synthetic module-scale records.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdm1/batch.hpp"

namespace {

std::vector<sdm1::CurveRecord> synthetic_records(int n) {
    std::vector<sdm1::CurveRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / n;
        sdm1::CurveRecord rec;
        rec.source_line = k + 2;
        rec.timestamp = "2011-01-22T12:05:04";
        rec.cardinal = sdm1::CardinalPoints::checked(
            5.26 + 0.02 * std::sin(6.0 * t), 21.15 + 0.1 * std::cos(5.0 * t),
            4.85 + 0.015 * std::sin(4.0 * t), 16.71 + 0.08 * std::cos(3.0 * t));
        rec.u_isc_pct = 0.2 + t;
        rec.u_voc_pct = 0.4 + 0.2 * t;
        rec.u_imp_pct = 0.3 + t;
        rec.u_vmp_pct = 0.4 + 0.5 * t;
        records.push_back(std::move(rec));
    }
    return records;
}

template <typename F>
double time_seconds(F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    const int n_domain = argc > 1 ? std::atoi(argv[1]) : 512;
    const int n_stats = argc > 2 ? std::atoi(argv[2]) : 2'000'000;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    const std::vector<sdm1::CurveRecord> records = synthetic_records(n_domain);
    std::vector<sdm1::DomainRow> serial_rows, parallel_rows;
    const double t_serial =
        time_seconds([&] { serial_rows = sdm1::compute_domains_serial(records); });
    const double t_parallel =
        time_seconds([&] { parallel_rows = sdm1::compute_domains(records); });

    long mismatches = 0;
    for (std::size_t i = 0; i < serial_rows.size(); ++i) {
        if (!serial_rows[i].result || !parallel_rows[i].result ||
            serial_rows[i].result->a_max != parallel_rows[i].result->a_max) {
            ++mismatches;
        }
    }
    std::printf("domain batch    n=%-8d serial %8.3f s   parallel %8.3f s   speedup %.2fx   mismatches %ld\n",
                n_domain, t_serial, t_parallel, t_serial / t_parallel, mismatches);

    const std::vector<sdm1::CurveRecord> stats_rows = synthetic_records(n_stats);
    sdm1::UncertaintyStats ref{}, par{};
    const double t_stats_serial =
        time_seconds([&] { ref = sdm1::summarize_uncertainties(stats_rows); });
    const double t_stats_parallel = time_seconds(
        [&] { par = sdm1::summarize_uncertainties_parallel(stats_rows); });
    std::printf("stats fold      n=%-8d serial %8.3f s   parallel %8.3f s   speedup %.2fx   |dmean| %.3g\n",
                n_stats, t_stats_serial, t_stats_parallel,
                t_stats_serial / t_stats_parallel,
                std::abs(ref.isc.mean - par.isc.mean));
    return 0;
}
