#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "femtoloss/error.hpp"
#include "femtoloss/propagation.hpp"
#include "femtoloss/quadrature.hpp"

namespace femtoloss {

/// Law-of-cosines distance between a PU at radius r0 and an SU at radius
/// r1, separated by angle theta as seen from the BS.
template <typename Scalar>
Scalar pu_su_distance(Scalar r0, Scalar r1, Scalar theta) {
    const Scalar sq = r0 * r0 + r1 * r1 - Scalar(2) * r0 * r1 * std::cos(theta);
    return std::sqrt(std::max(sq, Scalar(0)));
}

/// Prior moments of x = 1 / L_ps with the PU uniform on the circle of
/// radius r0 around the BS.
template <typename Scalar = double>
struct GeometryPrior {
    Scalar pu_radius{};
    Scalar su_radius{};
    Scalar x_mean{};
    Scalar x_mean_square{};
};

/// |r0 - r1| below this makes the mean-square integral diverge.
inline constexpr double kMinCircleClearance = 1.0;

/// x_mean = 1/(2 pi) int 1/(L0 D^alpha) dtheta and the mean square
/// analogously, over [0, 2 pi). The integrand is even in theta so only
/// [0, pi] is integrated. Breakpoints cluster toward theta = 0 where D is
/// smallest.
template <typename Scalar>
GeometryPrior<Scalar> x_moments(Scalar r0, Scalar r1, const PropagationModel<Scalar>& model,
                                Scalar rel_tol = Scalar(1e-8)) {
    if (!(r0 >= Scalar(0)) || !(r1 >= Scalar(0))) {
        throw InputError("circle radii must be non-negative");
    }
    const Scalar clearance = std::abs(r0 - r1);
    if (clearance < Scalar(kMinCircleClearance)) {
        throw SingularGeometryError("SU lies within " + std::to_string(kMinCircleClearance) +
                                    " m of the PU circle (r0=" + std::to_string(r0) + ", r1=" + std::to_string(r1) +
                                    ")");
    }

    GeometryPrior<Scalar> prior{r0, r1, Scalar(0), Scalar(0)};
    const Scalar alpha = model.exponent();
    const Scalar l0 = model.unit_loss();
    const Scalar pi = std::numbers::pi_v<Scalar>;

    if (r1 == Scalar(0) || r0 == Scalar(0)) {
        const Scalar x = Scalar(1) / (l0 * std::pow(std::max(r0, r1), alpha));
        prior.x_mean = x;
        prior.x_mean_square = x * x;
        return prior;
    }

    // Scale distances by the closest approach so the integrands peak at 1.
    const Scalar cos_scale = Scalar(2) * r0 * r1 / (clearance * clearance);
    auto inv_power = [&](Scalar theta, Scalar exponent) {
        const Scalar half_sin = std::sin(theta / Scalar(2));
        const Scalar ratio_sq = Scalar(1) + Scalar(2) * cos_scale * half_sin * half_sin;
        return std::pow(ratio_sq, -exponent / Scalar(2));
    };

    std::vector<Scalar> breaks{Scalar(0)};
    for (Scalar b = clearance / std::sqrt(r0 * r1); b < pi; b *= Scalar(4)) {
        breaks.push_back(b);
    }
    breaks.push_back(pi);

    const auto first = integrate_adaptive<Scalar>([&](Scalar t) { return inv_power(t, alpha); }, breaks, rel_tol);
    const auto second =
        integrate_adaptive<Scalar>([&](Scalar t) { return inv_power(t, Scalar(2) * alpha); }, breaks, rel_tol);
    if (!first.converged || !second.converged) {
        throw NumericError("inverse path-loss moment quadrature did not converge");
    }

    const Scalar base = Scalar(1) / (l0 * std::pow(clearance, alpha));
    prior.x_mean = base * first.value / pi;
    prior.x_mean_square = base * base * second.value / pi;
    return prior;
}

}  // namespace femtoloss
