#include "femtoloss/simulation.hpp"

#include <cmath>
#include <ostream>

#include "femtoloss/downlink.hpp"
#include "femtoloss/error.hpp"
#include "femtoloss/format.hpp"
#include "femtoloss/geometry_prior.hpp"
#include "femtoloss/uplink_power.hpp"

namespace femtoloss {

double pu_su_separation(const PolarPosition& pu, double su_radius) {
    const double dx = pu.radius_m * std::cos(pu.angle_rad) + su_radius;
    const double dy = pu.radius_m * std::sin(pu.angle_rad);
    return std::hypot(dx, dy);
}

std::vector<int> simulate_downlink_modes(const ScenarioConfig& config, double loss_bp, int count, RandomStream& rng) {
    std::vector<int> modes(static_cast<std::size_t>(count));
    for (auto& m : modes) {
        const double sinr = downlink_sinr(config.bs_power_w, rng.fading_gain(), config.noise_power_w, loss_bp);
        m = config.amc.assign_mode(sinr);
    }
    return modes;
}

ObservationTrace simulate_scenario(const ScenarioConfig& config, const PolarPosition& pu, double su_radius,
                                   RandomStream& rng, const SimulationHooks& hooks) {
    if (pu.radius_m < config.min_distance_m || pu.radius_m > config.cell_radius_m) {
        throw InputError("PU radius " + std::to_string(pu.radius_m) + " m outside [Rmin, R0]");
    }
    if (!(su_radius >= 0.0) || su_radius > config.cell_radius_m) {
        throw InputError("SU radius " + std::to_string(su_radius) + " m outside [0, R0]");
    }
    const double separation = pu_su_separation(pu, su_radius);
    if (!(separation >= kMinCircleClearance)) {
        throw InputError("PU and SU closer than " + std::to_string(kMinCircleClearance) + " m");
    }

    const int count = config.observations;
    ObservationTrace trace;
    GroundTruth& truth = trace.truth;
    truth.loss_bp = config.propagation.loss(pu.radius_m);
    truth.loss_pb = uplink_loss_from_downlink(truth.loss_bp, config.duplex);
    truth.loss_ps = config.propagation.loss(separation);
    truth.pu = pu;
    truth.su_radius_m = su_radius;
    truth.tx_power.resize(count);
    truth.gain_bp.resize(count);
    truth.gain_pb.resize(count);
    truth.gain_ps.resize(count);

    Observables& obs = trace.observables;
    obs.downlink_modes.resize(static_cast<std::size_t>(count));
    obs.uplink_modes.resize(static_cast<std::size_t>(count));
    obs.received_power.resize(count);

    const int fixed_mode = config.amc.assign_mode(config.target_sinr);
    for (int i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double h_bp = rng.fading_gain();
        const double h_pb = rng.fading_gain();
        const double h_ps = rng.fading_gain();
        const double noise = rng.noise_power(config.noise_power_w);
        const double h_sched = rng.fading_gain();
        truth.gain_bp[i] = h_bp;
        truth.gain_pb[i] = h_pb;
        truth.gain_ps[i] = h_ps;

        obs.downlink_modes[idx] =
            config.amc.assign_mode(downlink_sinr(config.bs_power_w, h_bp, config.noise_power_w, truth.loss_bp));

        if (config.uplink_policy == UplinkPolicy::FixedTarget) {
            obs.uplink_modes[idx] = fixed_mode;
        } else {
            const double snapshot = config.pu_max_power_w * h_sched / (config.noise_power_w * truth.loss_pb);
            obs.uplink_modes[idx] = config.amc.assign_mode(snapshot);
        }

        const double tx = simulate_tx_power(obs.uplink_modes[idx], truth.loss_pb, h_pb, config);
        truth.tx_power[i] = tx;
        const double su_gain = hooks.unit_su_fading ? 1.0 : h_ps;
        const double su_noise = hooks.zero_noise ? 0.0 : noise;
        obs.received_power[i] = tx * su_gain / truth.loss_ps + su_noise;
    }
    return trace;
}

namespace {

void check_observables(const Observables& obs) {
    const auto n = obs.downlink_modes.size();
    if (n == 0) {
        throw InputError("empty observation window");
    }
    if (obs.uplink_modes.size() != n || static_cast<std::size_t>(obs.received_power.size()) != n) {
        throw InputError("observable sequences differ in length");
    }
}

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const EstimationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EstimationError(name, e.what());
    }
}

}  // namespace

EstimationResult run_estimation_given_uplink_loss(const Observables& observables, double su_radius,
                                                  const ScenarioConfig& config, double uplink_loss) {
    check_observables(observables);
    EstimationResult result;
    result.loss_pb = uplink_loss;
    auto& diag = result.diagnostics;

    const auto stats = stage("power-moments",
                             [&] { return compute_power_stats(observables.uplink_modes, uplink_loss, config); });

    diag.prior = stage("geometry-prior", [&] {
        double r0 = config.propagation.distance_of(uplink_loss);
        if (std::abs(r0 - su_radius) < kMinCircleClearance) {
            r0 = r0 >= su_radius ? su_radius + kMinCircleClearance : su_radius - kMinCircleClearance;
            diag.pu_radius_adjusted = true;
        }
        return x_moments(r0, su_radius, config.propagation);
    });

    const auto linear = stage("lmmse", [&] {
        const auto system = build_correlations(stats, diag.prior, config.noise_power_w);
        return estimate_x<double>(system, observables.received_power);
    });
    diag.x_hat = linear.x_hat;
    diag.condition_estimate = linear.condition_estimate;
    diag.regularized = linear.regularized;

    const auto inverted = pathloss_from_x(linear.x_hat, config.propagation, config.cell_radius_m);
    result.loss_ps = inverted.loss;
    diag.loss_clamped = inverted.clamped;
    result.loss_sp = uplink_loss_from_downlink(result.loss_ps, config.duplex);
    return result;
}

EstimationResult run_estimation(const Observables& observables, double su_radius, const ScenarioConfig& config) {
    check_observables(observables);
    const auto downlink =
        stage("map-estimate", [&] { return estimate_downlink_loss(observables.downlink_modes, config); });
    const auto uplink = uplink_loss_from_downlink(downlink, config.duplex);
    EstimationResult result = run_estimation_given_uplink_loss(observables, su_radius, config, uplink.loss);
    result.loss_bp = downlink.loss;
    result.diagnostics.downlink = downlink;
    return result;
}

double abs_db_error(double real, double estimated) {
    if (!(real > 0.0) || !(estimated > 0.0)) {
        throw std::domain_error("dB error needs positive losses");
    }
    return std::abs(10.0 * std::log10(real) - 10.0 * std::log10(estimated));
}

void write_trace_csv(std::ostream& out, const Observables& observables) {
    out << "i,m_d,m_u,p_r_w\n";
    for (std::size_t i = 0; i < observables.size(); ++i) {
        out << i + 1 << ',' << observables.downlink_modes[i] << ',' << observables.uplink_modes[i] << ','
            << format_double(observables.received_power[static_cast<Eigen::Index>(i)]) << '\n';
    }
}

}  // namespace femtoloss
