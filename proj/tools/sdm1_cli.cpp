// sdm1 -- command-line front end for the one-parameter single-diode model:
// feasibility-domain computation, uncertainty intervals, parameter
// reconstruction, curve synthesis, plot traces and dataset statistics.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdm1/batch.hpp"
#include "sdm1/domain.hpp"
#include "sdm1/ingest.hpp"
#include "sdm1/model.hpp"
#include "sdm1/uncertainty.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;

using Cell = sdm1::ResultTable::Cell;

struct OutputOptions {
    std::string format = "csv";
    std::string output_path;

    sdm1::OutputFormat fmt() const {
        return format == "json" ? sdm1::OutputFormat::Json : sdm1::OutputFormat::Csv;
    }
};

void emit(const sdm1::ResultTable& table, const OutputOptions& out_opts) {
    if (out_opts.output_path.empty()) {
        sdm1::write_results(table, out_opts.fmt(), std::cout);
        return;
    }
    std::ofstream file(out_opts.output_path, std::ios::binary);
    if (!file) {
        throw sdm1::SinkWriteFailure("cannot open output file: " + out_opts.output_path);
    }
    sdm1::write_results(table, out_opts.fmt(), file);
}

void report_error(const std::string& type, const std::string& message,
                  const OutputOptions& out_opts) {
    if (out_opts.fmt() == sdm1::OutputFormat::Json) {
        nlohmann::ordered_json obj;
        obj["error"] = {{"type", type}, {"message", message}};
        std::cerr << obj.dump() << '\n';
    } else {
        std::cerr << "error (" << type << "): " << message << '\n';
    }
}

double env_override(const char* name, double fallback) {
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0') return fallback;
    double value = 0.0;
    const std::string text(raw);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(value > 0.0)) {
        throw sdm1::ValidationError(std::string(name) + " must be a positive number");
    }
    return value;
}

sdm1::DomainOptions domain_options_from_env() {
    sdm1::DomainOptions opts;
    opts.root.abs_tol_f = env_override("SDM1_ABS_TOL_F", opts.root.abs_tol_f);
    opts.root.abs_tol_x = env_override("SDM1_ABS_TOL_X", opts.root.abs_tol_x);
    return opts;
}

struct CardinalFlags {
    double isc = 0.0, voc = 0.0, imp = 0.0, vmp = 0.0;
    CLI::Option* opt_isc = nullptr;
    CLI::Option* opt_voc = nullptr;
    CLI::Option* opt_imp = nullptr;
    CLI::Option* opt_vmp = nullptr;

    void add_to(CLI::App* cmd) {
        opt_isc = cmd->add_option("--isc", isc, "Short-circuit current, A");
        opt_voc = cmd->add_option("--voc", voc, "Open-circuit voltage, V");
        opt_imp = cmd->add_option("--imp", imp, "Maximum-power current, A");
        opt_vmp = cmd->add_option("--vmp", vmp, "Maximum-power voltage, V");
    }

    bool any() const {
        return opt_isc->count() || opt_voc->count() || opt_imp->count() ||
               opt_vmp->count();
    }

    bool all() const {
        return opt_isc->count() && opt_voc->count() && opt_imp->count() &&
               opt_vmp->count();
    }

    sdm1::CardinalPoints points() const {
        return sdm1::CardinalPoints::checked(isc, voc, imp, vmp);
    }
};

/// Enforces the one-input rule: a file XOR the full set of inline flags.
void require_one_source(const CardinalFlags& flags, const std::string& input_path) {
    if (!input_path.empty() && flags.any()) {
        throw sdm1::ValidationError("use either --input or inline cardinal flags, not both");
    }
    if (input_path.empty()) {
        if (!flags.all()) {
            throw sdm1::ValidationError(
                "missing input: supply --isc/--voc/--imp/--vmp or --input FILE");
        }
    }
}

sdm1::ParseResult load_records(const std::string& input_path,
                               const std::string& profile_path) {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw sdm1::UnreadableInput("cannot open input file: " + input_path);
    sdm1::MappingProfile profile = sdm1::MappingProfile::native();
    if (!profile_path.empty()) {
        std::ifstream prof(profile_path, std::ios::binary);
        if (!prof) {
            throw sdm1::UnreadableInput("cannot open mapping profile: " + profile_path);
        }
        profile = sdm1::MappingProfile::from_stream(prof);
    }
    return parse_records(in, profile);
}

void report_diagnostics(const sdm1::ParseResult& parsed) {
    for (const sdm1::RowDiagnostic& diag : parsed.diagnostics) {
        std::cerr << "line " << diag.line << ": " << diag.reason << '\n';
    }
    if (!parsed.diagnostics.empty()) {
        std::cerr << parsed.diagnostics.size() << " row(s) skipped, "
                  << parsed.records.size() << " parsed\n";
    }
}

std::vector<std::string> echo_columns() {
    return {"source_line", "timestamp",  "isc_a",      "voc_v",
            "imp_a",       "vmp_v",      "u_isc_pct",  "u_voc_pct",
            "u_imp_pct",   "u_vmp_pct",  "irradiance_wm2", "t_module_c"};
}

void append_echo(std::vector<Cell>& row, const sdm1::CurveRecord& rec) {
    row.emplace_back(rec.source_line);
    row.emplace_back(rec.timestamp);
    row.emplace_back(rec.cardinal.i_sc);
    row.emplace_back(rec.cardinal.v_oc);
    row.emplace_back(rec.cardinal.i_mp);
    row.emplace_back(rec.cardinal.v_mp);
    row.emplace_back(rec.u_isc_pct);
    row.emplace_back(rec.u_voc_pct);
    row.emplace_back(rec.u_imp_pct);
    row.emplace_back(rec.u_vmp_pct);
    if (rec.irradiance) {
        row.emplace_back(*rec.irradiance);
    } else {
        row.emplace_back(std::monostate{});
    }
    if (rec.t_module_k) {
        row.emplace_back(*rec.t_module_k - 273.15);
    } else {
        row.emplace_back(std::monostate{});
    }
}

void append_domain(std::vector<Cell>& row, const sdm1::DomainResult& dr) {
    row.emplace_back(dr.a_max);
    row.emplace_back(dr.r_s_min);
    row.emplace_back(std::string(to_string(dr.selected_rule)));
    row.emplace_back(dr.f_sh_value);
    row.emplace_back(dr.f_mp_value);
    row.emplace_back(dr.converged);
}

const std::vector<std::string> kDomainColumns{"a_max_v",    "r_s_min_ohm",
                                              "selected_rule", "f_sh_resid",
                                              "f_mp_resid", "converged"};

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

struct DomainArgs {
    CardinalFlags flags;
    std::string input_path, profile_path;
    bool serial = false;
    OutputOptions out;
};

int run_domain(const DomainArgs& args) {
    const sdm1::DomainOptions opts = domain_options_from_env();
    sdm1::ResultTable table;
    if (args.input_path.empty()) {
        table.columns = kDomainColumns;
        const sdm1::DomainResult dr = compute_domain(args.flags.points(), opts);
        std::vector<Cell> row;
        append_domain(row, dr);
        table.rows.push_back(std::move(row));
        emit(table, args.out);
        return dr.converged ? kExitOk : kExitConvergence;
    }

    const sdm1::ParseResult parsed = load_records(args.input_path, args.profile_path);
    report_diagnostics(parsed);
    const std::vector<sdm1::DomainRow> rows =
        args.serial ? sdm1::compute_domains_serial(parsed.records, opts)
                    : sdm1::compute_domains(parsed.records, opts);

    table.columns = echo_columns();
    for (const std::string& col : kDomainColumns) table.columns.push_back(col);
    table.columns.push_back("status");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<Cell> row;
        append_echo(row, parsed.records[i]);
        if (rows[i].result) {
            append_domain(row, *rows[i].result);
            row.emplace_back(std::string("ok"));
        } else {
            for (std::size_t k = 0; k < kDomainColumns.size(); ++k) {
                row.emplace_back(std::monostate{});
            }
            row.emplace_back(rows[i].error);
        }
        table.rows.push_back(std::move(row));
    }
    emit(table, args.out);
    return kExitOk;
}

struct UncertaintyArgs {
    CardinalFlags flags;
    double u_isc = 0.0, u_voc = 0.0, u_imp = 0.0, u_vmp = 0.0;
    bool corners = false;
    std::string input_path, profile_path;
    bool serial = false;
    OutputOptions out;
};

const std::vector<std::string> kIntervalColumns{
    "low_a_max_v",  "low_r_s_min_ohm",  "low_rule",
    "high_a_max_v", "high_r_s_min_ohm", "high_rule",
    "a_max_lo_v",   "a_max_hi_v",       "r_s_min_lo_ohm", "r_s_min_hi_ohm"};

void append_interval(std::vector<Cell>& row, const sdm1::DomainInterval& iv) {
    row.emplace_back(iv.low.a_max);
    row.emplace_back(iv.low.r_s_min);
    row.emplace_back(std::string(to_string(iv.low.selected_rule)));
    row.emplace_back(iv.high.a_max);
    row.emplace_back(iv.high.r_s_min);
    row.emplace_back(std::string(to_string(iv.high.selected_rule)));
    row.emplace_back(iv.a_max_interval[0]);
    row.emplace_back(iv.a_max_interval[1]);
    row.emplace_back(iv.r_s_min_interval[0]);
    row.emplace_back(iv.r_s_min_interval[1]);
}

int run_uncertainty(const UncertaintyArgs& args) {
    const sdm1::DomainOptions opts = domain_options_from_env();
    sdm1::ResultTable table;

    if (args.input_path.empty()) {
        const sdm1::UncertainCardinalPoints ucp = sdm1::UncertainCardinalPoints::checked(
            args.flags.points(), args.u_isc, args.u_voc, args.u_imp, args.u_vmp);
        if (args.corners) {
            table.columns = {"s_isc", "s_voc", "s_imp", "s_vmp",
                             "a_max_v", "r_s_min_ohm", "selected_rule", "status"};
            for (const sdm1::CornerResult& corner : corner_domains(ucp, opts)) {
                std::vector<Cell> row;
                for (int s : corner.signs) row.emplace_back(static_cast<long>(s));
                if (corner.result) {
                    row.emplace_back(corner.result->a_max);
                    row.emplace_back(corner.result->r_s_min);
                    row.emplace_back(std::string(to_string(corner.result->selected_rule)));
                    row.emplace_back(std::string("ok"));
                } else {
                    row.emplace_back(std::monostate{});
                    row.emplace_back(std::monostate{});
                    row.emplace_back(std::monostate{});
                    row.emplace_back(corner.error);
                }
                table.rows.push_back(std::move(row));
            }
        } else {
            table.columns = kIntervalColumns;
            std::vector<Cell> row;
            append_interval(row, domain_interval(ucp, opts));
            table.rows.push_back(std::move(row));
        }
        emit(table, args.out);
        return kExitOk;
    }

    if (args.corners) {
        throw sdm1::ValidationError("--corners is available with inline flags only");
    }
    const sdm1::ParseResult parsed = load_records(args.input_path, args.profile_path);
    report_diagnostics(parsed);
    const std::vector<sdm1::IntervalRow> rows =
        args.serial ? sdm1::compute_intervals_serial(parsed.records, opts)
                    : sdm1::compute_intervals(parsed.records, opts);

    table.columns = echo_columns();
    table.columns.insert(table.columns.end(),
                         {"a_max_v", "r_s_min_ohm", "selected_rule"});
    for (const std::string& col : kIntervalColumns) table.columns.push_back(col);
    table.columns.push_back("status");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<Cell> row;
        append_echo(row, parsed.records[i]);
        if (rows[i].nominal && rows[i].interval) {
            row.emplace_back(rows[i].nominal->a_max);
            row.emplace_back(rows[i].nominal->r_s_min);
            row.emplace_back(std::string(to_string(rows[i].nominal->selected_rule)));
            append_interval(row, *rows[i].interval);
            row.emplace_back(std::string("ok"));
        } else {
            for (std::size_t k = 0; k < 3 + kIntervalColumns.size(); ++k) {
                row.emplace_back(std::monostate{});
            }
            row.emplace_back(rows[i].error);
        }
        table.rows.push_back(std::move(row));
    }
    emit(table, args.out);
    return kExitOk;
}

struct ParamsArgs {
    CardinalFlags flags;
    double a = 0.0;
    OutputOptions out;
};

int run_params(const ParamsArgs& args) {
    const sdm1::DomainOptions opts = domain_options_from_env();
    const sdm1::SdmParameters p = reduced_solution(args.flags.points(), args.a, opts);
    sdm1::ResultTable table;
    table.columns = {"i_ph_a", "i_o_a", "a_v", "g_sh_s", "r_s_ohm"};
    table.rows.push_back({Cell{p.i_ph}, Cell{p.i_o}, Cell{p.a}, Cell{p.g_sh}, Cell{p.r_s}});
    emit(table, args.out);
    return kExitOk;
}

struct CurveArgs {
    CardinalFlags flags;
    double a = 0.0;
    int points = 101;
    OutputOptions out;
};

int run_curve(const CurveArgs& args) {
    const sdm1::DomainOptions opts = domain_options_from_env();
    if (args.points < 2) throw sdm1::ValidationError("--points must be >= 2");
    const sdm1::SdmParameters p = reduced_solution(args.flags.points(), args.a, opts);
    sdm1::ResultTable table;
    table.columns = {"v_pv_v", "i_pv_a"};
    for (const sdm1::IVPoint& point : sample_curve(p, args.points, opts.root)) {
        table.rows.push_back({Cell{point.v_pv}, Cell{point.i_pv}});
    }
    emit(table, args.out);
    return kExitOk;
}

struct PlotDataArgs {
    CardinalFlags flags;
    std::string a_grid;
    OutputOptions out;
};

std::vector<double> parse_grid(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw sdm1::ValidationError("--a-grid expects start:stop:count");
    }
    const auto to_double = [](const std::string& text) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw sdm1::ValidationError("bad --a-grid number: '" + text + "'");
        }
        return v;
    };
    const double start = to_double(spec.substr(0, first));
    const double stop = to_double(spec.substr(first + 1, second - first - 1));
    const double count_raw = to_double(spec.substr(second + 1));
    const int count = static_cast<int>(count_raw);
    if (count < 1 || count != count_raw) {
        throw sdm1::ValidationError("--a-grid count must be a positive integer");
    }
    if (!(start > 0.0) || stop < start) {
        throw sdm1::ValidationError("--a-grid requires 0 < start <= stop");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(start);
    } else {
        for (int i = 0; i < count; ++i) {
            grid.push_back(start + (stop - start) * i / (count - 1));
        }
    }
    return grid;
}

int run_plot_data(const PlotDataArgs& args) {
    const sdm1::DomainOptions opts = domain_options_from_env();
    const sdm1::CardinalPoints cp = args.flags.points();
    sdm1::ResultTable table;
    table.columns = {"a_v", "r_s_sh_ohm", "r_s_mp_ohm", "status"};
    for (double a : parse_grid(args.a_grid)) {
        std::vector<Cell> row;
        row.emplace_back(a);
        std::string status = "ok";
        try {
            row.emplace_back(r_s_sh_of_a(cp, a, opts));
        } catch (const sdm1::NoRootInRange&) {
            row.emplace_back(std::monostate{});
            status = "no-sh-root";
        }
        try {
            row.emplace_back(r_s_mp_of_a(cp, a, opts));
        } catch (const sdm1::NoRootInRange&) {
            row.emplace_back(std::monostate{});
            status = status == "ok" ? "no-mp-root" : "no-roots";
        }
        row.emplace_back(status);
        table.rows.push_back(std::move(row));
    }
    emit(table, args.out);
    return kExitOk;
}

struct StatsArgs {
    std::string input_path, profile_path;
    OutputOptions out;
};

double round1(double x) { return std::round(x * 10.0) / 10.0; }

int run_stats(const StatsArgs& args) {
    const sdm1::ParseResult parsed = load_records(args.input_path, args.profile_path);
    report_diagnostics(parsed);
    if (parsed.records.empty()) {
        throw sdm1::EmptyInput("no valid records (" +
                               std::to_string(parsed.diagnostics.size()) +
                               " diagnostics)");
    }
    const sdm1::UncertaintyStats stats =
        sdm1::summarize_uncertainties_parallel(parsed.records);
    sdm1::ResultTable table;
    table.columns = {"variable", "min_pct", "mean_pct", "max_pct", "sd_pct"};
    const auto add = [&](const char* name, const sdm1::VariableStats& vs) {
        table.rows.push_back({Cell{std::string(name)}, Cell{round1(vs.min)},
                              Cell{round1(vs.mean)}, Cell{round1(vs.max)},
                              Cell{round1(vs.sd)}});
    };
    add("isc", stats.isc);
    add("voc", stats.voc);
    add("imp", stats.imp);
    add("vmp", stats.vmp);
    emit(table, args.out);
    return kExitOk;
}

void add_output_options(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--output", out.output_path, "Write to file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-parameter single-diode model toolkit"};
    app.require_subcommand(1);

    DomainArgs domain_args;
    CLI::App* domain_cmd = app.add_subcommand(
        "domain", "Feasible-domain corner (a_max, r_s_min) per curve");
    domain_args.flags.add_to(domain_cmd);
    domain_cmd->add_option("--input", domain_args.input_path, "Input data file");
    domain_cmd->add_option("--profile", domain_args.profile_path, "Column mapping profile");
    domain_cmd->add_flag("--serial", domain_args.serial, "Disable row parallelism");
    add_output_options(domain_cmd, domain_args.out);

    UncertaintyArgs unc_args;
    CLI::App* unc_cmd = app.add_subcommand(
        "uncertainty", "Low/high domain endpoints and intervals");
    unc_args.flags.add_to(unc_cmd);
    unc_cmd->add_option("--u-isc", unc_args.u_isc, "Half-width of i_sc, A");
    unc_cmd->add_option("--u-voc", unc_args.u_voc, "Half-width of v_oc, V");
    unc_cmd->add_option("--u-imp", unc_args.u_imp, "Half-width of i_mp, A");
    unc_cmd->add_option("--u-vmp", unc_args.u_vmp, "Half-width of v_mp, V");
    unc_cmd->add_flag("--corners", unc_args.corners,
                      "Evaluate all 16 sign combinations (inline mode)");
    unc_cmd->add_option("--input", unc_args.input_path, "Input data file");
    unc_cmd->add_option("--profile", unc_args.profile_path, "Column mapping profile");
    unc_cmd->add_flag("--serial", unc_args.serial, "Disable row parallelism");
    add_output_options(unc_cmd, unc_args.out);

    ParamsArgs params_args;
    CLI::App* params_cmd = app.add_subcommand(
        "params", "Reconstruct the five parameters at a given diode factor");
    params_args.flags.add_to(params_cmd);
    params_cmd->add_option("--a", params_args.a, "Equivalent diode factor, V")
        ->required();
    add_output_options(params_cmd, params_args.out);

    CurveArgs curve_args;
    CLI::App* curve_cmd = app.add_subcommand("curve", "Synthesize I-V points");
    curve_args.flags.add_to(curve_cmd);
    curve_cmd->add_option("--a", curve_args.a, "Equivalent diode factor, V")
        ->required();
    curve_cmd->add_option("--points", curve_args.points, "Number of samples")
        ->capture_default_str();
    add_output_options(curve_cmd, curve_args.out);

    PlotDataArgs plot_args;
    CLI::App* plot_cmd = app.add_subcommand(
        "plot-data", "Boundary-curve traces r_s_sh(a), r_s_mp(a)");
    plot_args.flags.add_to(plot_cmd);
    plot_cmd->add_option("--a-grid", plot_args.a_grid, "Grid spec start:stop:count")
        ->required();
    add_output_options(plot_cmd, plot_args.out);

    StatsArgs stats_args;
    CLI::App* stats_cmd = app.add_subcommand(
        "stats", "Uncertainty summary statistics of a data file");
    stats_cmd->add_option("--input", stats_args.input_path, "Input data file")
        ->required();
    stats_cmd->add_option("--profile", stats_args.profile_path, "Column mapping profile");
    add_output_options(stats_cmd, stats_args.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    const OutputOptions* active_out = &domain_args.out;
    if (unc_cmd->parsed()) active_out = &unc_args.out;
    if (params_cmd->parsed()) active_out = &params_args.out;
    if (curve_cmd->parsed()) active_out = &curve_args.out;
    if (plot_cmd->parsed()) active_out = &plot_args.out;
    if (stats_cmd->parsed()) active_out = &stats_args.out;

    try {
        if (domain_cmd->parsed()) {
            require_one_source(domain_args.flags, domain_args.input_path);
            return run_domain(domain_args);
        }
        if (unc_cmd->parsed()) {
            require_one_source(unc_args.flags, unc_args.input_path);
            return run_uncertainty(unc_args);
        }
        if (params_cmd->parsed()) {
            require_one_source(params_args.flags, {});
            return run_params(params_args);
        }
        if (curve_cmd->parsed()) {
            require_one_source(curve_args.flags, {});
            return run_curve(curve_args);
        }
        if (plot_cmd->parsed()) {
            require_one_source(plot_args.flags, {});
            return run_plot_data(plot_args);
        }
        if (stats_cmd->parsed()) {
            return run_stats(stats_args);
        }
    } catch (const sdm1::ValidationError& err) {
        report_error("validation", err.what(), *active_out);
        return kExitValidation;
    } catch (const sdm1::UnreadableInput& err) {
        report_error("unreadable-input", err.what(), *active_out);
        return kExitValidation;
    } catch (const sdm1::MappingMismatch& err) {
        report_error("mapping-mismatch", err.what(), *active_out);
        return kExitValidation;
    } catch (const sdm1::EmptyInput& err) {
        report_error("empty-input", err.what(), *active_out);
        return kExitValidation;
    } catch (const sdm1::NonPositiveParameters& err) {
        report_error("non-positive-parameters", err.what(), *active_out);
        return kExitConvergence;
    } catch (const sdm1::Error& err) {
        report_error("numerical", err.what(), *active_out);
        return kExitConvergence;
    } catch (const std::exception& err) {
        report_error("internal", err.what(), *active_out);
        return kExitUnexpected;
    }
    return kExitUnexpected;
}
