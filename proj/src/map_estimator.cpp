#include "femtoloss/map_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "femtoloss/downlink.hpp"
#include "femtoloss/error.hpp"
#include "femtoloss/units.hpp"

namespace femtoloss {

std::vector<long> mode_histogram(std::span<const int> modes, const AmcTable& table) {
    std::vector<long> counts(static_cast<std::size_t>(table.size()), 0);
    for (int m : modes) {
        if (!table.valid_mode(m)) {
            throw InputError("downlink mode " + std::to_string(m) + " outside 1.." + std::to_string(table.size()));
        }
        ++counts[static_cast<std::size_t>(m - 1)];
    }
    return counts;
}

double joint_log_density_from_counts(std::span<const long> counts, double loss, const ScenarioConfig& config) {
    double total = log_pathloss_prior_pdf(config.propagation, config.cell_radius_m, config.min_distance_m, loss);
    if (std::isinf(total)) {
        return total;
    }
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) {
            continue;
        }
        const int m = static_cast<int>(k) + 1;
        total += static_cast<double>(counts[k]) *
                 log_mode_likelihood(config.amc, m, loss, config.bs_power_w, config.noise_power_w);
    }
    return std::isnan(total) ? -std::numeric_limits<double>::infinity() : total;
}

double joint_log_density(std::span<const int> downlink_modes, double loss, const ScenarioConfig& config) {
    const auto counts = mode_histogram(downlink_modes, config.amc);
    return joint_log_density_from_counts(counts, loss, config);
}

PathLossEstimate estimate_downlink_loss(std::span<const int> downlink_modes, const ScenarioConfig& config,
                                        const MapSearchOptions& options) {
    if (downlink_modes.empty()) {
        throw InputError("empty downlink mode sequence");
    }
    if (options.grid_points < 3 || !(options.refine_width_db > 0.0)) {
        throw InputError("MAP search needs >= 3 grid points and a positive refinement width");
    }
    const auto counts = mode_histogram(downlink_modes, config.amc);

    // Search variable u = ln L.
    const double u_lo = std::log(config.min_loss());
    const double u_hi = std::log(config.max_loss());
    auto objective = [&](double u) { return joint_log_density_from_counts(counts, std::exp(u), config); };
    const double width = options.refine_width_db * std::log(10.0) / 10.0;
    const auto search = maximize_on_grid(objective, u_lo, u_hi, options.grid_points, width);

    PathLossEstimate estimate;
    estimate.grid_points_evaluated = search.grid_points;
    estimate.refinement_evaluations = search.refinement_evaluations;
    estimate.loss = std::exp(search.argmax);
    estimate.loss_db = linear_to_db(estimate.loss);
    estimate.log_density = search.value;
    estimate.at_lower_edge = search.argmax - u_lo <= search.grid_step;
    estimate.at_upper_edge = u_hi - search.argmax <= search.grid_step;
    return estimate;
}

double uplink_loss_from_downlink(double downlink_loss, const Duplex& duplex) {
    if (duplex.mode == DuplexMode::Tdd) {
        return downlink_loss;
    }
    return downlink_loss * db_to_linear(duplex.fdd_offset_db);
}

PathLossEstimate uplink_loss_from_downlink(const PathLossEstimate& downlink, const Duplex& duplex) {
    PathLossEstimate uplink = downlink;
    if (duplex.mode == DuplexMode::Fdd) {
        uplink.loss = uplink_loss_from_downlink(downlink.loss, duplex);
        uplink.loss_db = downlink.loss_db + duplex.fdd_offset_db;
    }
    return uplink;
}

}  // namespace femtoloss
