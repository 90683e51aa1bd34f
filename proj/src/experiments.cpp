#include "femtoloss/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "femtoloss/error.hpp"
#include "femtoloss/format.hpp"
#include "femtoloss/units.hpp"

namespace femtoloss {

ErrorSummary summarize(const std::vector<double>& errors_db) {
    ErrorSummary s;
    s.trials = static_cast<int>(errors_db.size());
    if (errors_db.empty()) {
        s.mean_db = s.stderr_db = std::nan("");
        return s;
    }
    double sum = 0.0;
    for (double e : errors_db) {
        sum += e;
    }
    s.mean_db = sum / s.trials;
    if (s.trials > 1) {
        double ss = 0.0;
        for (double e : errors_db) {
            ss += (e - s.mean_db) * (e - s.mean_db);
        }
        s.stderr_db = std::sqrt(ss / (s.trials - 1) / s.trials);
    }
    return s;
}

std::uint64_t trial_seed(std::uint64_t root, std::uint64_t point, std::uint64_t trial) {
    return derive_stream_seed(derive_stream_seed(root, point), trial);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<Fig3Row> run_fig3(const Fig3Spec& spec, const ScenarioConfig& config) {
    if (spec.distances_m.empty()) {
        throw InputError("fig3 needs at least one distance");
    }
    if (spec.trials < 1) {
        throw InputError("trial count must be >= 1");
    }
    for (double d : spec.distances_m) {
        if (d < config.min_distance_m || d > config.cell_radius_m) {
            throw InputError("fig3 distance " + format_double(d) + " m outside [Rmin, R0]");
        }
    }
    const std::size_t points = spec.distances_m.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    std::vector<double> errors(points * trials);

    parallel_for(points * trials, spec.threads, [&](std::size_t job) {
        const std::size_t point = job / trials;
        const std::size_t trial = job % trials;
        RandomStream rng(trial_seed(config.seed, point, trial));
        const double truth = config.propagation.loss(spec.distances_m[point]);
        const auto modes = simulate_downlink_modes(config, truth, config.observations, rng);
        const auto estimate = estimate_downlink_loss(modes, config);
        errors[job] = abs_db_error(truth, estimate.loss);
    });

    std::vector<Fig3Row> rows;
    for (std::size_t p = 0; p < points; ++p) {
        std::vector<double> slice(errors.begin() + static_cast<std::ptrdiff_t>(p * trials),
                                  errors.begin() + static_cast<std::ptrdiff_t>((p + 1) * trials));
        rows.push_back({spec.distances_m[p], summarize(slice)});
    }
    return rows;
}

std::vector<Fig5Row> run_fig5(const Fig5Spec& spec, const ScenarioConfig& config) {
    if (spec.trials < 1 || spec.theta_points < 1) {
        throw InputError("fig5 needs trials >= 1 and theta_points >= 1");
    }
    std::vector<Fig5Row> rows;
    for (double r1 : spec.su_radii_m) {
        if (r1 < 0.0 || r1 > config.cell_radius_m) {
            throw InputError("fig5 SU radius " + format_double(r1) + " m outside [0, R0]");
        }
        for (double r0 : spec.pu_radii_m) {
            if (r0 < config.min_distance_m || r0 > config.cell_radius_m) {
                throw InputError("fig5 PU radius " + format_double(r0) + " m outside [Rmin, R0]");
            }
            for (int k = 0; k < spec.theta_points; ++k) {
                Fig5Row row;
                row.su_radius_m = r1;
                row.pu_radius_m = r0;
                row.theta_rad = 2.0 * std::numbers::pi * k / spec.theta_points;
                row.skipped = pu_su_separation({r0, row.theta_rad}, r1) < kMinCircleClearance;
                rows.push_back(row);
            }
        }
    }

    const auto trials = static_cast<std::size_t>(spec.trials);
    std::vector<double> errors(rows.size() * trials, std::nan(""));
    parallel_for(rows.size() * trials, spec.threads, [&](std::size_t job) {
        const std::size_t point = job / trials;
        const std::size_t trial = job % trials;
        const Fig5Row& row = rows[point];
        if (row.skipped) {
            return;
        }
        RandomStream rng(trial_seed(config.seed, point, trial));
        const PolarPosition pu{row.pu_radius_m, row.theta_rad};
        const auto trace = simulate_scenario(config, pu, row.su_radius_m, rng);
        const auto estimate = run_estimation(trace.observables, row.su_radius_m, config);
        errors[job] = abs_db_error(trace.truth.loss_ps, estimate.loss_ps);
    });

    for (std::size_t p = 0; p < rows.size(); ++p) {
        if (rows[p].skipped) {
            rows[p].error = {std::nan(""), std::nan(""), 0};
            continue;
        }
        std::vector<double> slice(errors.begin() + static_cast<std::ptrdiff_t>(p * trials),
                                  errors.begin() + static_cast<std::ptrdiff_t>((p + 1) * trials));
        rows[p].error = summarize(slice);
    }
    return rows;
}

SingleOutcome run_single(const SingleSpec& spec, const ScenarioConfig& config) {
    RandomStream rng(derive_stream_seed(config.seed, 0));
    SingleOutcome outcome;
    outcome.trace = simulate_scenario(config, spec.pu, spec.su_radius_m, rng);
    outcome.estimate = run_estimation(outcome.trace.observables, spec.su_radius_m, config);
    return outcome;
}

void write_single_report(std::ostream& out, const SingleOutcome& outcome) {
    const auto& truth = outcome.trace.truth;
    const auto& est = outcome.estimate;
    const auto& diag = est.diagnostics;
    auto db = [](double linear) { return format_double(linear_to_db(linear)); };

    out << "PU position: r0=" << format_double(truth.pu.radius_m) << " m, theta=" << format_double(truth.pu.angle_rad)
        << " rad\n";
    out << "SU position: r1=" << format_double(truth.su_radius_m) << " m\n";
    out << "observations: " << outcome.trace.observables.size() << "\n\n";
    out << "L_bp      true " << db(truth.loss_bp) << " dB\n";
    out << "L_bp_hat  est  " << db(est.loss_bp) << " dB  err " << format_double(abs_db_error(truth.loss_bp, est.loss_bp))
        << " dB\n";
    out << "L_pb      true " << db(truth.loss_pb) << " dB\n";
    out << "L_pb_hat  est  " << db(est.loss_pb) << " dB\n";
    out << "L_ps      true " << db(truth.loss_ps) << " dB\n";
    out << "L_ps_hat  est  " << db(est.loss_ps) << " dB  err " << format_double(abs_db_error(truth.loss_ps, est.loss_ps))
        << " dB\n";
    out << "L_sp_hat  est  " << db(est.loss_sp) << " dB\n\n";
    out << "map: grid=" << diag.downlink.grid_points_evaluated << " refine=" << diag.downlink.refinement_evaluations
        << " log_density=" << format_double(diag.downlink.log_density)
        << " lower_edge=" << (diag.downlink.at_lower_edge ? "yes" : "no")
        << " upper_edge=" << (diag.downlink.at_upper_edge ? "yes" : "no") << "\n";
    out << "prior: r0_hat=" << format_double(diag.prior.pu_radius) << " m x_mean=" << format_double(diag.prior.x_mean)
        << " x_mean_square=" << format_double(diag.prior.x_mean_square)
        << " adjusted=" << (diag.pu_radius_adjusted ? "yes" : "no") << "\n";
    out << "lmmse: x_hat=" << format_double(diag.x_hat) << " cond=" << format_double(diag.condition_estimate)
        << " regularized=" << (diag.regularized ? "yes" : "no") << " clamped=" << (diag.loss_clamped ? "yes" : "no")
        << "\n";
}

void write_fig3_csv(std::ostream& out, const std::vector<Fig3Row>& rows) {
    out << "distance_m,mean_abs_err_db,stderr_db,trials\n";
    for (const auto& row : rows) {
        out << format_double(row.distance_m) << ',' << format_double(row.error.mean_db) << ','
            << format_double(row.error.stderr_db) << ',' << row.error.trials << '\n';
    }
}

void write_fig5_csv(std::ostream& out, const std::vector<Fig5Row>& rows) {
    out << "r1_m,r0_m,theta_rad,mean_abs_err_db,stderr_db,trials\n";
    for (const auto& row : rows) {
        out << format_double(row.su_radius_m) << ',' << format_double(row.pu_radius_m) << ','
            << format_double(row.theta_rad) << ',' << format_double(row.error.mean_db) << ','
            << format_double(row.error.stderr_db) << ',' << row.error.trials << '\n';
    }
}

}  // namespace femtoloss
