#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "femtoloss/propagation.hpp"
#include "femtoloss/scenario_config.hpp"

namespace femtoloss {

/// Density of L = L0 z^alpha when the PU is uniform over the annulus
/// Rmin <= z <= R0. Zero outside [L(Rmin), L(R0)].
template <typename Scalar>
Scalar pathloss_prior_pdf(const PropagationModel<Scalar>& model, Scalar cell_radius, Scalar min_distance, Scalar loss) {
    const Scalar lo = model.loss(min_distance);
    const Scalar hi = model.loss(cell_radius);
    if (loss < lo || loss > hi) {
        return Scalar(0);
    }
    const Scalar alpha = model.exponent();
    const Scalar l0 = model.unit_loss();
    const Scalar norm = Scalar(2) / (alpha * l0 * (cell_radius * cell_radius - min_distance * min_distance));
    return norm * std::pow(loss / l0, Scalar(2) / alpha - Scalar(1));
}

template <typename Scalar>
Scalar log_pathloss_prior_pdf(const PropagationModel<Scalar>& model, Scalar cell_radius, Scalar min_distance,
                              Scalar loss) {
    const Scalar lo = model.loss(min_distance);
    const Scalar hi = model.loss(cell_radius);
    if (loss < lo || loss > hi) {
        return -std::numeric_limits<Scalar>::infinity();
    }
    const Scalar alpha = model.exponent();
    const Scalar l0 = model.unit_loss();
    const Scalar norm = Scalar(2) / (alpha * l0 * (cell_radius * cell_radius - min_distance * min_distance));
    return std::log(norm) + (Scalar(2) / alpha - Scalar(1)) * std::log(loss / l0);
}

/// How often each mode occurs in a sequence; index 0 is mode 1.
/// Throws InputError on an out-of-range mode.
std::vector<long> mode_histogram(std::span<const int> modes, const AmcTable& table);

/// log f(m_d, L_bp): prior plus the sum of per-instant mode log-likelihoods.
/// Returns -inf when any factor vanishes or L_bp is off-support.
double joint_log_density(std::span<const int> downlink_modes, double loss, const ScenarioConfig& config);

/// Same quantity from precomputed mode counts.
double joint_log_density_from_counts(std::span<const long> counts, double loss, const ScenarioConfig& config);

struct MapSearchOptions {
    int grid_points = 2048;
    double refine_width_db = 0.01;
};

struct SearchResult {
    double argmax = 0.0;
    double value = 0.0;
    int grid_points = 0;
    int refinement_evaluations = 0;
    double grid_step = 0.0;
};

/// Maximizes `objective` on [lo, hi]: uniform grid, then golden-section on
/// the two cells around the best grid point until the bracket is narrower
/// than `width`. The first (smallest-argument) maximum wins ties.
template <typename F>
SearchResult maximize_on_grid(F&& objective, double lo, double hi, int grid_points, double width) {
    SearchResult out;
    const int n = grid_points;
    const double step = (hi - lo) / (n - 1);
    out.grid_points = n;
    out.grid_step = step;
    auto point = [&](int k) { return k == n - 1 ? hi : lo + k * step; };

    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double value = objective(point(k));
        if (value > best_value) {
            best_value = value;
            best = k;
        }
    }
    double best_x = point(best);

    if (std::isfinite(best_value)) {
        double a = std::max(lo, best_x - step);
        double b = std::min(hi, best_x + step);
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = objective(c);
        double fd = objective(d);
        int evaluations = 2;
        while (b - a > width) {
            if (fc >= fd) {  // ties keep the lower side
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = objective(d);
            }
            ++evaluations;
        }
        const double mid = 0.5 * (a + b);
        const double f_mid = objective(mid);
        out.refinement_evaluations = evaluations + 1;
        // Keep the grid point unless refinement improves on it.
        if (f_mid >= best_value) {
            best_x = mid;
            best_value = f_mid;
        }
    }
    out.argmax = std::clamp(best_x, lo, hi);
    out.value = best_value;
    return out;
}

struct PathLossEstimate {
    double loss = 0.0;
    double loss_db = 0.0;
    int grid_points_evaluated = 0;
    int refinement_evaluations = 0;
    double log_density = 0.0;
    bool at_lower_edge = false;  // maximizer within one grid step of L(Rmin)
    bool at_upper_edge = false;  // maximizer within one grid step of L(R0)
};

/// MAP estimate of the BS-PU path loss from the downlink mode sequence.
///
/// Grid search over log L on [L(Rmin), L(R0)] followed by golden-section
/// refinement of the bracketing grid cells. Ties resolve toward smaller L.
PathLossEstimate estimate_downlink_loss(std::span<const int> downlink_modes, const ScenarioConfig& config,
                                        const MapSearchOptions& options = {});

/// L_pb from L_bp: identical under TDD, shifted by the configured offset under FDD.
PathLossEstimate uplink_loss_from_downlink(const PathLossEstimate& downlink, const Duplex& duplex);
double uplink_loss_from_downlink(double downlink_loss, const Duplex& duplex);

}  // namespace femtoloss
