#pragma once

#include <cmath>
#include <limits>

#include "femtoloss/amc.hpp"

namespace femtoloss {

/// Instantaneous downlink SINR at the PU: P0 |h|^2 / (sigma2 L).
template <typename Scalar>
inline Scalar downlink_sinr(Scalar bs_power, Scalar fading_gain, Scalar noise_power, Scalar loss) {
    return bs_power * fading_gain / (noise_power * loss);
}

/// P(lower <= |h|^2 / scale' < upper) for unit-exponential |h|^2, written as
/// exp(-lower * scale) - exp(-upper * scale). `upper` may be +inf.
template <typename Scalar>
inline Scalar interval_probability(Scalar lower, Scalar upper, Scalar scale) {
    const Scalar head = std::exp(-lower * scale);
    if (std::isinf(upper)) {
        return head;
    }
    return head - std::exp(-upper * scale);
}

/// log of interval_probability without cancellation for narrow intervals.
template <typename Scalar>
inline Scalar log_interval_probability(Scalar lower, Scalar upper, Scalar scale) {
    const Scalar a = lower * scale;
    if (std::isinf(upper)) {
        return -a;
    }
    const Scalar gap = (upper - lower) * scale;
    if (!(gap > Scalar(0))) {
        return -std::numeric_limits<Scalar>::infinity();
    }
    return -a + std::log(-std::expm1(-gap));
}

/// Lower SINR edge of the region mapped to mode m. Outage (SINR < Omega(1))
/// is reported as mode 1, so mode 1 owns [0, Omega(2)).
inline double effective_lower_threshold(const AmcTable& table, int m) {
    return m == 1 ? 0.0 : table.threshold(m);
}

/// P(m_d = m | L_bp) under Rayleigh fading.
inline double mode_likelihood(const AmcTable& table, int m, double loss, double bs_power, double noise_power) {
    const double scale = loss * noise_power / bs_power;
    return interval_probability(effective_lower_threshold(table, m), table.upper_threshold(m), scale);
}

inline double log_mode_likelihood(const AmcTable& table, int m, double loss, double bs_power, double noise_power) {
    const double scale = loss * noise_power / bs_power;
    return log_interval_probability(effective_lower_threshold(table, m), table.upper_threshold(m), scale);
}

}  // namespace femtoloss
