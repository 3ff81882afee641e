#include "sdm1/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace sdm1 {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

double parse_number(std::string cell, char decimal_separator) {
    cell = trim(cell);
    if (decimal_separator != '.') {
        std::replace(cell.begin(), cell.end(), decimal_separator, '.');
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ValidationError("not a number: '" + cell + "'");
    }
    return value;
}

const char* const kRequiredFields[] = {"timestamp", "isc",   "voc",
                                       "imp",       "vmp",   "u_isc",
                                       "u_voc",     "u_imp", "u_vmp"};

}  // namespace

void ColumnMapping::validate() const {
    const std::vector<std::pair<const char*, int>> required{
        {"timestamp", timestamp}, {"isc", isc},     {"voc", voc},
        {"imp", imp},             {"vmp", vmp},     {"u_isc", u_isc},
        {"u_voc", u_voc},         {"u_imp", u_imp}, {"u_vmp", u_vmp}};
    std::vector<int> seen;
    for (const auto& [name, idx] : required) {
        if (idx < 0) {
            throw ValidationError(std::string("column not mapped: ") + name);
        }
        seen.push_back(idx);
    }
    if (irradiance) seen.push_back(*irradiance);
    if (temperature) seen.push_back(*temperature);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw ValidationError("mapped column indices must be distinct");
    }
}

MappingProfile MappingProfile::native() {
    MappingProfile profile;
    profile.columns = {{"timestamp", "timestamp"},
                       {"isc", "isc_a"},
                       {"voc", "voc_v"},
                       {"imp", "imp_a"},
                       {"vmp", "vmp_v"},
                       {"u_isc", "u_isc_pct"},
                       {"u_voc", "u_voc_pct"},
                       {"u_imp", "u_imp_pct"},
                       {"u_vmp", "u_vmp_pct"},
                       {"irradiance", "irradiance_wm2"},
                       {"temperature", "t_module_c"}};
    return profile;
}

MappingProfile MappingProfile::from_stream(std::istream& in) {
    if (!in) throw UnreadableInput("cannot read mapping profile");
    MappingProfile profile;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("mapping profile line " + std::to_string(line_no) +
                                  " is not 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "delimiter") {
            if (value == "tab" || value == "\\t") {
                profile.delimiter = '\t';
            } else if (!value.empty()) {
                profile.delimiter = value.front();
            }
        } else if (key == "decimal_separator") {
            if (!value.empty()) profile.decimal_separator = value.front();
        } else if (key == "header_rows") {
            profile.header_rows = static_cast<int>(parse_number(value, '.'));
        } else if (key == "temperature_unit") {
            if (value == "celsius") {
                profile.temperature_unit = TemperatureUnit::Celsius;
            } else if (value == "kelvin") {
                profile.temperature_unit = TemperatureUnit::Kelvin;
            } else {
                throw ValidationError("unknown temperature_unit: " + value);
            }
        } else {
            profile.columns[key] = value;
        }
    }
    return profile;
}

ColumnMapping resolve_mapping(const MappingProfile& profile,
                              const std::string& header_line) {
    const std::vector<std::string> cells = split(header_line, profile.delimiter);
    const auto find_column = [&](const std::string& field) -> std::optional<int> {
        const auto it = profile.columns.find(field);
        if (it == profile.columns.end()) return std::nullopt;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (trim(cells[i]) == it->second) return static_cast<int>(i);
        }
        return std::nullopt;
    };

    ColumnMapping mapping;
    mapping.delimiter = profile.delimiter;
    mapping.decimal_separator = profile.decimal_separator;
    mapping.header_rows = profile.header_rows;
    mapping.temperature_unit = profile.temperature_unit;

    std::string missing;
    const auto assign = [&](const char* field, int& slot) {
        if (const std::optional<int> idx = find_column(field)) {
            slot = *idx;
        } else {
            missing += missing.empty() ? field : std::string(", ") + field;
        }
    };
    assign("timestamp", mapping.timestamp);
    assign("isc", mapping.isc);
    assign("voc", mapping.voc);
    assign("imp", mapping.imp);
    assign("vmp", mapping.vmp);
    assign("u_isc", mapping.u_isc);
    assign("u_voc", mapping.u_voc);
    assign("u_imp", mapping.u_imp);
    assign("u_vmp", mapping.u_vmp);
    if (!missing.empty()) {
        throw MappingMismatch("header is missing required columns: " + missing);
    }
    mapping.irradiance = find_column("irradiance");
    mapping.temperature = find_column("temperature");
    mapping.validate();
    return mapping;
}

ParseResult parse_records(std::istream& in, const ColumnMapping& mapping) {
    if (!in) throw UnreadableInput("cannot read input stream");
    mapping.validate();

    int max_index = std::max({mapping.timestamp, mapping.isc, mapping.voc,
                              mapping.imp, mapping.vmp, mapping.u_isc,
                              mapping.u_voc, mapping.u_imp, mapping.u_vmp});
    if (mapping.irradiance) max_index = std::max(max_index, *mapping.irradiance);
    if (mapping.temperature) max_index = std::max(max_index, *mapping.temperature);

    ParseResult result;
    std::string line;
    long line_no = 0;
    long data_rows = 0;
    long short_rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no <= mapping.header_rows) continue;
        if (trim(line).empty()) continue;
        ++data_rows;

        const std::vector<std::string> cells = split(line, mapping.delimiter);
        if (static_cast<int>(cells.size()) <= max_index) {
            ++short_rows;
            result.diagnostics.push_back(
                {line_no, "row has " + std::to_string(cells.size()) +
                              " columns, mapping requires at least " +
                              std::to_string(max_index + 1)});
            continue;
        }
        try {
            CurveRecord rec;
            rec.source_line = line_no;
            rec.timestamp = trim(cells[static_cast<std::size_t>(mapping.timestamp)]);
            const auto num = [&](int idx) {
                return parse_number(cells[static_cast<std::size_t>(idx)],
                                    mapping.decimal_separator);
            };
            rec.cardinal = CardinalPoints::checked(num(mapping.isc), num(mapping.voc),
                                                   num(mapping.imp), num(mapping.vmp));
            rec.u_isc_pct = num(mapping.u_isc);
            rec.u_voc_pct = num(mapping.u_voc);
            rec.u_imp_pct = num(mapping.u_imp);
            rec.u_vmp_pct = num(mapping.u_vmp);
            if (rec.u_isc_pct < 0 || rec.u_voc_pct < 0 || rec.u_imp_pct < 0 ||
                rec.u_vmp_pct < 0) {
                throw ValidationError("uncertainty percentages must be >= 0");
            }
            if (mapping.irradiance &&
                !trim(cells[static_cast<std::size_t>(*mapping.irradiance)]).empty()) {
                const double g = num(*mapping.irradiance);
                if (g < 0) throw ValidationError("irradiance must be >= 0");
                rec.irradiance = g;
            }
            if (mapping.temperature &&
                !trim(cells[static_cast<std::size_t>(*mapping.temperature)]).empty()) {
                double t = num(*mapping.temperature);
                if (mapping.temperature_unit == TemperatureUnit::Celsius) {
                    t += 273.15;
                }
                if (t <= 0) throw ValidationError("module temperature must be > 0 K");
                rec.t_module_k = t;
            }
            result.records.push_back(std::move(rec));
        } catch (const Error& err) {
            result.diagnostics.push_back({line_no, err.what()});
        }
    }
    if (data_rows > 0 && short_rows == data_rows) {
        throw MappingMismatch(
            "every data row has fewer columns than the mapping requires");
    }
    return result;
}

ParseResult parse_records(std::istream& in, const MappingProfile& profile) {
    if (!in) throw UnreadableInput("cannot read input stream");
    if (profile.header_rows < 1) {
        throw ValidationError("profile resolution requires at least one header row");
    }
    std::string header;
    for (int i = 0; i < profile.header_rows; ++i) {
        if (!std::getline(in, header)) {
            throw UnreadableInput("input ends before the header row");
        }
    }
    ColumnMapping mapping = resolve_mapping(profile, header);
    mapping.header_rows = 0;  // header already consumed
    ParseResult result = parse_records(in, mapping);
    for (CurveRecord& rec : result.records) rec.source_line += profile.header_rows;
    for (RowDiagnostic& diag : result.diagnostics) diag.line += profile.header_rows;
    return result;
}

UncertainCardinalPoints to_uncertain(const CurveRecord& rec) {
    return UncertainCardinalPoints::checked(
        rec.cardinal, rec.u_isc_pct / 100.0 * std::abs(rec.cardinal.i_sc),
        rec.u_voc_pct / 100.0 * std::abs(rec.cardinal.v_oc),
        rec.u_imp_pct / 100.0 * std::abs(rec.cardinal.i_mp),
        rec.u_vmp_pct / 100.0 * std::abs(rec.cardinal.v_mp));
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

namespace {

std::string csv_escape(const std::string& cell, char delimiter) {
    if (cell.find(delimiter) == std::string::npos &&
        cell.find('"') == std::string::npos &&
        cell.find('\n') == std::string::npos) {
        return cell;
    }
    std::string quoted = "\"";
    for (char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_csv(const ResultTable& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << csv_escape(table.columns[i], ',');
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            std::visit(
                [&](const auto& cell) {
                    using T = std::decay_t<decltype(cell)>;
                    if constexpr (std::is_same_v<T, std::string>) {
                        out << csv_escape(cell, ',');
                    } else if constexpr (std::is_same_v<T, double>) {
                        out << format_double(cell);
                    } else if constexpr (std::is_same_v<T, long>) {
                        out << cell;
                    } else if constexpr (std::is_same_v<T, bool>) {
                        out << (cell ? "true" : "false");
                    }
                },
                row[i]);
        }
        out << '\n';
    }
}

void write_json(const ResultTable& table, std::ostream& out) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            std::visit(
                [&](const auto& cell) {
                    using T = std::decay_t<decltype(cell)>;
                    if constexpr (std::is_same_v<T, std::monostate>) {
                        obj[table.columns[i]] = nullptr;
                    } else {
                        obj[table.columns[i]] = cell;
                    }
                },
                row[i]);
        }
        array.push_back(std::move(obj));
    }
    out << array.dump() << '\n';
}

}  // namespace

void write_results(const ResultTable& table, OutputFormat format,
                   std::ostream& out) {
    if (!out) throw SinkWriteFailure("output sink is not writable");
    if (format == OutputFormat::Csv) {
        write_csv(table, out);
    } else {
        write_json(table, out);
    }
    out.flush();
    if (!out) throw SinkWriteFailure("write to output sink failed");
}

}  // namespace sdm1
