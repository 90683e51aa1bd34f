#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>

#include <Eigen/Core>

#include "femtoloss/error.hpp"
#include "femtoloss/quadrature.hpp"
#include "femtoloss/scenario_config.hpp"

namespace femtoloss {

/// SINR-target power control clipped to [pmin, pmax]:
/// target * loss * noise / |h|^2, saturating at the limits.
template <typename Scalar>
Scalar clipped_tx_power(Scalar target_sinr, Scalar loss, Scalar noise_power, Scalar fading_gain, Scalar pmin,
                        Scalar pmax) {
    if (!(fading_gain > Scalar(0))) {
        return pmax;
    }
    const Scalar unclipped = target_sinr * loss * noise_power / fading_gain;
    return std::clamp(unclipped, pmin, pmax);
}

/// SINR the PU aims for at the BS when the uplink mode is m.
inline double uplink_target_sinr(const ScenarioConfig& config, int uplink_mode) {
    if (config.uplink_policy == UplinkPolicy::FixedTarget) {
        return config.target_sinr;
    }
    return config.amc.threshold(uplink_mode);
}

inline double simulate_tx_power(int uplink_mode, double uplink_loss, double fading_gain,
                                const ScenarioConfig& config) {
    return clipped_tx_power(uplink_target_sinr(config, uplink_mode), uplink_loss, config.noise_power_w, fading_gain,
                            config.pu_min_power_w, config.pu_max_power_w);
}

template <typename Scalar>
struct PowerMoments {
    Scalar mean{};
    Scalar mean_square{};
};

/// Distribution of the clipped transmit power for unit-exponential fading.
///
/// With k = Omega * L * sigma2 the unclipped power is k / |h|^2, so
///   P(P_t = pmin) = exp(-k/pmin),
///   f(p) = k/p^2 exp(-k/p) on (pmin, pmax),
///   P(P_t = pmax) = 1 - exp(-k/pmax).
template <typename Scalar = double>
class TxPowerDistribution {
public:
    TxPowerDistribution(Scalar k, Scalar pmin, Scalar pmax) : k_(k), pmin_(pmin), pmax_(pmax) {
        if (!(pmin > Scalar(0)) || !(pmin < pmax)) {
            throw ConfigError("tx power distribution needs 0 < pmin < pmax");
        }
        if (!(k >= Scalar(0))) {
            throw InputError("tx power scale k must be non-negative");
        }
    }

    Scalar scale() const { return k_; }
    Scalar mass_at_min() const { return std::exp(-k_ / pmin_); }
    Scalar mass_at_max() const { return -std::expm1(-k_ / pmax_); }

    Scalar density(Scalar p) const {
        if (!(p > pmin_) || !(p < pmax_)) {
            return Scalar(0);
        }
        return k_ / (p * p) * std::exp(-k_ / p);
    }

    /// Closed form of the integral of density() over (pmin, pmax).
    Scalar continuous_mass() const { return std::exp(-k_ / pmax_) - std::exp(-k_ / pmin_); }

    Scalar cdf(Scalar p) const {
        if (p < pmin_) {
            return Scalar(0);
        }
        if (p >= pmax_) {
            return Scalar(1);
        }
        return std::exp(-k_ / p);
    }

    /// Mean and mean square, point masses included.
    ///
    /// The continuous parts are integrated in v = ln(k/p):
    ///   int p f(p) dp   = k   int exp(-e^v) dv,
    ///   int p^2 f(p) dp = k^2 int exp(-e^v - v) dv,
    /// both smooth over the many decades pmax/pmin may span.
    PowerMoments<Scalar> moments(Scalar rel_tol = Scalar(1e-8)) const {
        PowerMoments<Scalar> out;
        out.mean = pmin_ * mass_at_min() + pmax_ * mass_at_max();
        out.mean_square = pmin_ * pmin_ * mass_at_min() + pmax_ * pmax_ * mass_at_max();
        if (k_ == Scalar(0)) {
            return out;
        }
        const Scalar v_lo = std::log(k_ / pmax_);
        // exp(-e^v) underflows past e^v ~ 745.
        const Scalar v_hi = std::min(std::log(k_ / pmin_), std::log(Scalar(745)));
        if (!(v_hi > v_lo)) {
            return out;
        }
        // Breakpoints where the integrands change character.
        std::vector<Scalar> breaks{v_lo};
        for (Scalar b : {Scalar(-4), Scalar(0), Scalar(2)}) {
            if (b > v_lo && b < v_hi) {
                breaks.push_back(b);
            }
        }
        breaks.push_back(v_hi);

        const auto first = integrate_adaptive<Scalar>([](Scalar v) { return std::exp(-std::exp(v)); }, breaks,
                                                      rel_tol / Scalar(10));
        // Factor exp(-v_lo) = pmax / k out of the second integrand.
        const auto second = integrate_adaptive<Scalar>(
            [v_lo](Scalar v) { return std::exp(-std::exp(v) - (v - v_lo)); }, breaks, rel_tol / Scalar(10));
        if (!first.converged || !second.converged) {
            throw NumericError("tx power moment quadrature did not converge (k=" + std::to_string(k_) +
                               ", evaluations=" + std::to_string(first.evaluations + second.evaluations) + ")");
        }
        out.mean += k_ * first.value;
        out.mean_square += k_ * pmax_ * second.value;
        return out;
    }

private:
    Scalar k_;
    Scalar pmin_;
    Scalar pmax_;
};

/// Moments of the clipped power; pmin == pmax collapses to a point mass.
template <typename Scalar>
PowerMoments<Scalar> clipped_power_moments(Scalar k, Scalar pmin, Scalar pmax, Scalar rel_tol = Scalar(1e-8)) {
    if (pmin == pmax) {
        return {pmin, pmin * pmin};
    }
    return TxPowerDistribution<Scalar>(k, pmin, pmax).moments(rel_tol);
}

inline TxPowerDistribution<double> tx_power_pdf(int uplink_mode, double uplink_loss, const ScenarioConfig& config) {
    if (!(uplink_loss > 0.0)) {
        throw InputError("uplink loss must be positive");
    }
    const double k = uplink_target_sinr(config, uplink_mode) * uplink_loss * config.noise_power_w;
    return TxPowerDistribution<double>(k, config.pu_min_power_w, config.pu_max_power_w);
}

inline double tx_power_mean(int uplink_mode, double uplink_loss, const ScenarioConfig& config) {
    return tx_power_pdf(uplink_mode, uplink_loss, config).moments().mean;
}

inline double tx_power_mean_square(int uplink_mode, double uplink_loss, const ScenarioConfig& config) {
    return tx_power_pdf(uplink_mode, uplink_loss, config).moments().mean_square;
}

/// Per-instant transmit-power moments.
template <typename Scalar = double>
struct PowerStats {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mean_square;

    Eigen::Index size() const { return mean.size(); }
};

/// Moments for every instant of an uplink mode sequence. Each distinct
/// mode is integrated once.
inline PowerStats<double> compute_power_stats(std::span<const int> uplink_modes, double uplink_loss,
                                              const ScenarioConfig& config) {
    std::map<int, PowerMoments<double>> by_mode;
    PowerStats<double> stats;
    stats.mean.resize(static_cast<Eigen::Index>(uplink_modes.size()));
    stats.mean_square.resize(static_cast<Eigen::Index>(uplink_modes.size()));
    for (std::size_t i = 0; i < uplink_modes.size(); ++i) {
        const int m = uplink_modes[i];
        if (!config.amc.valid_mode(m)) {
            throw InputError("uplink mode " + std::to_string(m) + " outside 1.." + std::to_string(config.amc.size()));
        }
        auto it = by_mode.find(m);
        if (it == by_mode.end()) {
            it = by_mode.emplace(m, tx_power_pdf(m, uplink_loss, config).moments()).first;
        }
        const auto idx = static_cast<Eigen::Index>(i);
        stats.mean[idx] = it->second.mean;
        stats.mean_square[idx] = it->second.mean_square;
    }
    return stats;
}

}  // namespace femtoloss
