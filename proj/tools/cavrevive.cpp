// cavrevive.cpp — Command-line scenario runner
//
//   cavrevive evolve     --config run.conf [--output out.csv] [--format csv|json]
//   cavrevive qfunc      --config run.conf --time t_star --kind field|spin [--grid N]
//   cavrevive times      --config run.conf
//   cavrevive basin-scan --config run.conf --samples K   (or --n-qubits/--nbar/--theta)
//   cavrevive verify
//
// Exit codes: 0 success, 2 config error, 3 Fock cutoff too small, 4 verify failure.

#include "cavrevive/cavrevive.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace cavrevive;
using scenario::OutputFormat;

constexpr int kExitConfig = 2;
constexpr int kExitCutoff = 3;
constexpr int kExitVerify = 4;

struct Common {
    std::string config;
    std::string output;
    std::string format;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    auto* opt = cmd->add_option("--config", c.config, "scenario file (key=value or JSON sidecar)");
    if (needs_config) opt->required();
    cmd->add_option("--output", c.output, "output path (default: stdout)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

OutputFormat pick_format(const Common& c, OutputFormat from_config) {
    if (c.format == "csv") return OutputFormat::csv;
    if (c.format == "json") return OutputFormat::json;
    return from_config;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("--output: cannot write '" + path + "'");
    out << text;
}

void write_sidecar(const std::string& path, const nlohmann::json& meta) {
    if (path.empty()) return;
    write_text(path + ".meta.json", meta.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tavis–Cummings collapse and revival simulator"};
    app.require_subcommand(1);

    Common evolve_opts, qfunc_opts, times_opts, scan_opts;
    auto* evolve_cmd = app.add_subcommand("evolve", "time series of qubit observables");
    add_common(evolve_cmd, evolve_opts, true);

    auto* qfunc_cmd = app.add_subcommand("qfunc", "field or spin Q function at one time");
    add_common(qfunc_cmd, qfunc_opts, true);
    std::string q_time = "0";
    std::string q_kind = "field";
    std::optional<int> q_grid;
    qfunc_cmd->add_option("--time", q_time, "lambda*t: number, t_c, t_r, t_star, t_minus, 2*t_star, t_r/4 ...");
    qfunc_cmd->add_option("--kind", q_kind, "field or spin")->check(CLI::IsMember({"field", "spin"}));
    qfunc_cmd->add_option("--grid", q_grid, "grid points per axis (spin: polar points)");

    auto* times_cmd = app.add_subcommand("times", "characteristic times as JSON");
    add_common(times_cmd, times_opts, true);

    auto* scan_cmd = app.add_subcommand("basin-scan", "attractor probability across the basin");
    add_common(scan_cmd, scan_opts, false);
    int scan_samples = 50;
    std::optional<int> scan_nq;
    std::optional<double> scan_nbar, scan_theta;
    scan_cmd->add_option("--samples", scan_samples, "number of basin parameters a");
    scan_cmd->add_option("--n-qubits", scan_nq, "overrides model.n_qubits");
    scan_cmd->add_option("--nbar", scan_nbar, "overrides model.nbar");
    scan_cmd->add_option("--theta", scan_theta, "overrides model.theta");

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant self-checks");
    std::string verify_output;
    verify_cmd->add_option("--output", verify_output, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (const char* env = std::getenv("CAVREVIVE_THREADS"); env && !parse_thread_count(env))
            throw ConfigError("CAVREVIVE_THREADS: expected a positive integer, got '" + std::string(env) + "'");

        if (*evolve_cmd) {
            auto cfg = scenario::load_config(evolve_opts.config);
            if (!evolve_opts.output.empty()) cfg.output_path = evolve_opts.output;
            cfg.format = pick_format(evolve_opts, cfg.format);
            const auto result = scenario::run_evolve(cfg);
            write_text(cfg.output_path, scenario::render(result.table, cfg.format));
            write_sidecar(cfg.output_path, result.metadata);
        } else if (*qfunc_cmd) {
            const auto cfg = scenario::load_config(qfunc_opts.config);
            const auto kind = q_kind == "spin" ? scenario::QKind::spin : scenario::QKind::field;
            const int grid = q_grid.value_or(kind == scenario::QKind::spin ? kDefaultSpinGrid : kDefaultFieldGrid);
            const double t = scenario::parse_time_expression(q_time, cfg.model);
            const auto result = scenario::run_qfunc(cfg, t, kind, grid);
            const std::string path = qfunc_opts.output;
            write_text(path, scenario::render(result.table, pick_format(qfunc_opts, cfg.format)));
            write_sidecar(path, result.metadata);
        } else if (*times_cmd) {
            const auto cfg = scenario::load_config(times_opts.config);
            write_text(times_opts.output, scenario::run_times(cfg.model).dump(2) + "\n");
        } else if (*scan_cmd) {
            ModelParams model;
            OutputFormat fmt = OutputFormat::csv;
            if (!scan_opts.config.empty()) {
                const auto cfg = scenario::load_config(scan_opts.config);
                model = cfg.model;
                fmt = cfg.format;
            } else if (!scan_nq || !scan_nbar) {
                throw ConfigError("basin-scan: give --config or both --n-qubits and --nbar");
            }
            if (scan_nq) model.n_qubits = *scan_nq;
            if (scan_nbar) model.nbar = *scan_nbar;
            if (scan_theta) model.theta = *scan_theta;
            if (model.n_qubits < 1) throw ConfigError("--n-qubits: must be >= 1");
            if (model.nbar <= 0.0) throw ConfigError("--nbar: must be > 0");
            const auto table = scenario::run_basin_scan(model, scan_samples);
            write_text(scan_opts.output, scenario::render(table, pick_format(scan_opts, fmt)));
        } else if (*verify_cmd) {
            const auto report = verify::run_verify(verify::options_from_environment());
            write_text(verify_output, report.to_json().dump(2) + "\n");
            return report.passed() ? 0 : kExitVerify;
        }
    } catch (const CutoffTooSmall& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCutoff;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidParameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BasinOutOfRange& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
