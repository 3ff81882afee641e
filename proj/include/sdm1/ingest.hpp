#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdm1/record.hpp"
#include "sdm1/uncertainty.hpp"

namespace sdm1 {

enum class TemperatureUnit { Celsius, Kelvin };

/// Resolved column layout of one input file.
struct ColumnMapping {
    int timestamp = -1;
    int isc = -1;
    int voc = -1;
    int imp = -1;
    int vmp = -1;
    int u_isc = -1;
    int u_voc = -1;
    int u_imp = -1;
    int u_vmp = -1;
    std::optional<int> irradiance;
    std::optional<int> temperature;
    char delimiter = ',';
    char decimal_separator = '.';
    int header_rows = 1;
    TemperatureUnit temperature_unit = TemperatureUnit::Celsius;

    /// Throws ValidationError unless all required columns are mapped and
    /// all mapped indices are distinct.
    void validate() const;
};

/// Field-name to column-header-text mapping, resolved against a header row.
struct MappingProfile {
    std::map<std::string, std::string> columns;
    char delimiter = ',';
    char decimal_separator = '.';
    int header_rows = 1;
    TemperatureUnit temperature_unit = TemperatureUnit::Celsius;

    /// The native schema: timestamp,isc_a,voc_v,imp_a,vmp_v,u_isc_pct,
    /// u_voc_pct,u_imp_pct,u_vmp_pct[,irradiance_wm2,t_module_c].
    static MappingProfile native();

    /// Parses a `key = value` profile file. Recognized non-column keys:
    /// delimiter, decimal_separator, header_rows, temperature_unit.
    static MappingProfile from_stream(std::istream& in);
};

/// Matches the profile's header texts against a delimited header line.
/// Throws MappingMismatch when a required column is absent.
ColumnMapping resolve_mapping(const MappingProfile& profile,
                              const std::string& header_line);

struct RowDiagnostic {
    long line;  // 1-based line number in the input
    std::string reason;
};

struct ParseResult {
    std::vector<CurveRecord> records;
    std::vector<RowDiagnostic> diagnostics;
};

/// Streams records out of a delimited file. Malformed or invariant-violating
/// rows become diagnostics without aborting the run. Throws UnreadableInput
/// when the stream is not readable at all and MappingMismatch when every
/// data row has fewer columns than the mapping requires.
ParseResult parse_records(std::istream& in, const ColumnMapping& mapping);

/// Convenience overload: resolves the profile against the file's first
/// header row, then parses.
ParseResult parse_records(std::istream& in, const MappingProfile& profile);

/// Converts percent uncertainties into absolute half-widths.
UncertainCardinalPoints to_uncertain(const CurveRecord& rec);

/// Generic result table with deterministic rendering.
struct ResultTable {
    using Cell = std::variant<std::monostate, std::string, double, long, bool>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class OutputFormat { Csv, Json };

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

/// Emits the table with a fixed column order, shortest round-trip reals and
/// a newline-terminated final line; byte-stable across runs. JSON output is
/// one top-level array of objects. Throws SinkWriteFailure when the sink
/// rejects the write.
void write_results(const ResultTable& table, OutputFormat format,
                   std::ostream& out);

}  // namespace sdm1
