#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "femtoloss/geometry_prior.hpp"
#include "femtoloss/map_estimator.hpp"
#include "femtoloss/mmse_estimator.hpp"
#include "femtoloss/random.hpp"
#include "femtoloss/scenario_config.hpp"

namespace femtoloss {

/// Polar position around the BS. The SU sits at (-r1, 0), so a PU angle of
/// pi puts the PU on the BS-SU ray.
struct PolarPosition {
    double radius_m = 0.0;
    double angle_rad = 0.0;
};

/// Distance from a PU at `pu` to an SU at (-su_radius, 0).
double pu_su_separation(const PolarPosition& pu, double su_radius);

/// Everything the SU can observe over one window of I instants.
struct Observables {
    std::vector<int> downlink_modes;
    std::vector<int> uplink_modes;
    Eigen::VectorXd received_power;  // W

    std::size_t size() const { return downlink_modes.size(); }
};

/// Hidden state, for scoring only.
struct GroundTruth {
    double loss_bp = 0.0;
    double loss_pb = 0.0;
    double loss_ps = 0.0;
    PolarPosition pu;
    double su_radius_m = 0.0;
    Eigen::VectorXd tx_power;
    Eigen::VectorXd gain_bp;  // |h_bp|^2 per instant
    Eigen::VectorXd gain_pb;
    Eigen::VectorXd gain_ps;
};

struct ObservationTrace {
    Observables observables;
    GroundTruth truth;
};

/// Test-only switches that remove randomness from the PU-SU link.
struct SimulationHooks {
    bool zero_noise = false;
    bool unit_su_fading = false;
};

/// Downlink mode sequence for a PU at the given BS-PU loss.
std::vector<int> simulate_downlink_modes(const ScenarioConfig& config, double loss_bp, int count, RandomStream& rng);

/// One observation window with independent fading on BS-PU, PU-BS and
/// PU-SU links at every instant.
///
/// Under the AMC uplink policy m_u is assigned from a scheduling snapshot
/// of the uplink channel that is independent of the fading the PU then
/// compensates.
ObservationTrace simulate_scenario(const ScenarioConfig& config, const PolarPosition& pu, double su_radius,
                                   RandomStream& rng, const SimulationHooks& hooks = {});

struct EstimationDiagnostics {
    PathLossEstimate downlink;
    GeometryPrior<double> prior;
    bool pu_radius_adjusted = false;  // r0 moved off the SU circle
    double condition_estimate = 0.0;
    bool regularized = false;
    double x_hat = 0.0;
    bool loss_clamped = false;
};

struct EstimationResult {
    double loss_bp = 0.0;
    double loss_pb = 0.0;
    double loss_ps = 0.0;
    double loss_sp = 0.0;
    EstimationDiagnostics diagnostics;
};

/// The full non-cooperative pipeline: MAP L_bp from m_d, duplex to L_pb,
/// transmit-power and geometry moments, correlations, LMMSE x_hat, L_ps.
EstimationResult run_estimation(const Observables& observables, double su_radius, const ScenarioConfig& config);

/// Pipeline from the power-moment stage on, with L_pb supplied by the caller.
EstimationResult run_estimation_given_uplink_loss(const Observables& observables, double su_radius,
                                                  const ScenarioConfig& config, double uplink_loss);

/// |10 log10(real) - 10 log10(estimated)|.
double abs_db_error(double real, double estimated);

/// Columns i, m_d, m_u, p_r_w with a header row.
void write_trace_csv(std::ostream& out, const Observables& observables);

}  // namespace femtoloss
