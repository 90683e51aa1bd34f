#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "femtoloss/scenario_config.hpp"
#include "femtoloss/simulation.hpp"

namespace femtoloss {

struct ErrorSummary {
    double mean_db = 0.0;
    double stderr_db = 0.0;
    int trials = 0;
};

/// Mean and standard error of the mean.
ErrorSummary summarize(const std::vector<double>& errors_db);

struct Fig3Spec {
    std::vector<double> distances_m{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    int trials = 500;
    int threads = 1;
};

struct Fig3Row {
    double distance_m = 0.0;
    ErrorSummary error;
};

/// BS-PU loss error vs. distance: each trial simulates a downlink window
/// at the given distance and scores the MAP estimate against L(d).
std::vector<Fig3Row> run_fig3(const Fig3Spec& spec, const ScenarioConfig& config);

struct Fig5Spec {
    std::vector<double> su_radii_m{100, 400};
    std::vector<double> pu_radii_m{100, 250, 400};
    int theta_points = 36;
    int trials = 500;
    int threads = 1;
};

struct Fig5Row {
    double su_radius_m = 0.0;
    double pu_radius_m = 0.0;
    double theta_rad = 0.0;
    ErrorSummary error;
    bool skipped = false;  // PU and SU closer than the singularity guard
};

/// PU-SU loss error along PU circles for each SU radius, full pipeline.
std::vector<Fig5Row> run_fig5(const Fig5Spec& spec, const ScenarioConfig& config);

struct SingleSpec {
    PolarPosition pu{300.0, 0.8};
    double su_radius_m = 100.0;
};

struct SingleOutcome {
    ObservationTrace trace;
    EstimationResult estimate;
};

SingleOutcome run_single(const SingleSpec& spec, const ScenarioConfig& config);
void write_single_report(std::ostream& out, const SingleOutcome& outcome);

void write_fig3_csv(std::ostream& out, const std::vector<Fig3Row>& rows);
void write_fig5_csv(std::ostream& out, const std::vector<Fig5Row>& rows);

/// Runs task(0..count-1) on up to `threads` workers. Tasks write to
/// pre-sized slots, so output order never depends on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// Seed for trial `trial` of grid point `point`.
std::uint64_t trial_seed(std::uint64_t root, std::uint64_t point, std::uint64_t trial);

}  // namespace femtoloss
