#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "slowlight/checks.hpp"
#include "slowlight/config.hpp"
#include "slowlight/csv.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/harness.hpp"

namespace {

slowlight::RunConfig load_config(const std::string& path) {
    if (path.empty()) return slowlight::RunConfig{};
    return slowlight::parse_config(slowlight::read_text_file(path));
}

void write_or_print(const slowlight::CsvTable& table, const std::string& out) {
    if (out.empty())
        std::fputs(slowlight::render_csv(table).c_str(), stdout);
    else
        slowlight::emit_csv(table, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EIT slow-light simulator for an inhomogeneously broadened "
                 "three-level solid"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 1;
    app.add_option("--config", config_path, "JSON config file (defaults used if omitted)");
    app.add_option("--out", out_path, "output CSV path (stdout if omitted)");
    app.add_option("--seed", seed, "RNG seed (noise Monte Carlo only)");
    app.add_option("--threads", threads, "worker threads; must not change outputs")
        ->check(CLI::PositiveNumber);

    auto* cmd_calibrate = app.add_subcommand(
        "calibrate", "fit the Rabi calibration and background depth to the anchors");
    auto* cmd_spectrum = app.add_subcommand(
        "spectrum", "absorption spectrum with and without the coupling field");
    auto* cmd_delay = app.add_subcommand(
        "delay", "modulation-phase delay measurement and linear fit");
    auto* cmd_scan = app.add_subcommand(
        "intensity-scan", "EIT width, amplitude, delay and velocity vs intensity");
    auto* cmd_check = app.add_subcommand("check", "run the full invariant suite");
    for (auto* cmd : {cmd_calibrate, cmd_spectrum, cmd_delay, cmd_scan, cmd_check})
        cmd->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        slowlight::RunConfig cfg = load_config(config_path);
        (void)seed;  // reserved for noise studies; core pipeline is deterministic

        if (cmd_calibrate->parsed()) {
            const auto result = slowlight::calibrate(cfg.calibration, cfg, threads);
            write_or_print(slowlight::calibration_to_csv(result, cfg), out_path);
        } else if (cmd_spectrum->parsed()) {
            const auto dip = slowlight::dip_spectrum(cfg.medium, cfg.spectrum, threads);
            write_or_print(slowlight::spectrum_to_csv(dip, cfg), out_path);
        } else if (cmd_delay->parsed()) {
            const auto m = slowlight::run_delay_measurement(cfg, threads);
            write_or_print(slowlight::delay_to_csv(m, cfg), out_path);
        } else if (cmd_scan->parsed()) {
            const auto table = slowlight::run_intensity_scan(cfg, threads);
            write_or_print(slowlight::scan_table_to_csv(table, cfg), out_path);
        } else if (cmd_check->parsed()) {
            const auto results = slowlight::run_all_checks(cfg, threads);
            bool all_ok = true;
            slowlight::CsvTable table;
            table.add_meta("config_hash", slowlight::config_hash(cfg));
            table.columns = {"check_index", "passed"};
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& r = results[i];
                std::fprintf(stderr, "%-32s %s  %s\n", r.name.c_str(),
                             r.passed ? "PASS" : "FAIL", r.detail.c_str());
                table.add_meta(r.name, (r.passed ? "PASS " : "FAIL ") + r.detail);
                table.rows.push_back({static_cast<double>(i), r.passed ? 1.0 : 0.0});
                all_ok = all_ok && r.passed;
            }
            write_or_print(table, out_path);
            if (!all_ok) return 3;
        }
        return 0;
    } catch (const slowlight::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const slowlight::numerical_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const slowlight::io_error& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
