// femtoloss: scenario runner and error-curve experiments.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "femtoloss/error.hpp"
#include "femtoloss/experiments.hpp"
#include "femtoloss/scenario_config.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kIoError = 2, kNumericError = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw IoError("cannot write '" + path + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-cooperative path-loss estimation in a macro/femto two-tier network"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    int threads = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file")->required();
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    };

    femtoloss::SingleSpec single;
    std::string dump_trace;
    auto* single_cmd = app.add_subcommand("single", "simulate one scenario and report every estimate");
    add_common(single_cmd);
    single_cmd->add_option("--pu-r", single.pu.radius_m, "PU distance from BS (m)");
    single_cmd->add_option("--pu-theta", single.pu.angle_rad, "PU angle (rad); the SU sits at angle pi");
    single_cmd->add_option("--su-r", single.su_radius_m, "SU distance from BS (m)");
    single_cmd->add_option("--dump-trace", dump_trace, "write the observed trace as CSV");
    single_cmd->add_option("--trials", trials, "ignored for single");

    femtoloss::Fig3Spec fig3;
    auto* fig3_cmd = app.add_subcommand("fig3", "BS-PU path-loss error vs. distance (CSV)");
    add_common(fig3_cmd);
    fig3_cmd->add_option("--trials", trials, "Monte Carlo trials per distance")->check(CLI::PositiveNumber);
    fig3_cmd->add_option("--distances", fig3.distances_m, "PU-BS distances (m)")->delimiter(',');

    femtoloss::Fig5Spec fig5;
    auto* fig5_cmd = app.add_subcommand("fig5", "PU-SU path-loss error along PU circles (CSV)");
    add_common(fig5_cmd);
    fig5_cmd->add_option("--trials", trials, "Monte Carlo trials per grid point")->check(CLI::PositiveNumber);
    fig5_cmd->add_option("--su-radii", fig5.su_radii_m, "SU distances from BS (m)")->delimiter(',');
    fig5_cmd->add_option("--pu-radii", fig5.pu_radii_m, "PU circle radii (m)")->delimiter(',');
    fig5_cmd->add_option("--theta-points", fig5.theta_points, "points per circle")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        femtoloss::ScenarioConfig config = femtoloss::load_config(config_path);
        if (seed) {
            config.seed = *seed;
        }

        std::ostringstream text;
        if (*single_cmd) {
            const auto outcome = femtoloss::run_single(single, config);
            femtoloss::write_single_report(text, outcome);
            if (!dump_trace.empty()) {
                std::ostringstream csv;
                femtoloss::write_trace_csv(csv, outcome.trace.observables);
                emit(csv.str(), dump_trace);
            }
        } else if (*fig3_cmd) {
            fig3.trials = trials.value_or(fig3.trials);
            fig3.threads = threads;
            femtoloss::write_fig3_csv(text, femtoloss::run_fig3(fig3, config));
        } else {
            fig5.trials = trials.value_or(fig5.trials);
            fig5.threads = threads;
            const auto rows = femtoloss::run_fig5(fig5, config);
            for (const auto& row : rows) {
                if (row.skipped) {
                    std::cerr << "warning: skipped r1=" << row.su_radius_m << " r0=" << row.pu_radius_m
                              << " theta=" << row.theta_rad << " (PU on top of SU)\n";
                }
            }
            femtoloss::write_fig5_csv(text, rows);
        }
        emit(text.str(), out_path);
        return kOk;
    } catch (const femtoloss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const femtoloss::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    }
}
