#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "femtoloss/error.hpp"
#include "femtoloss/geometry_prior.hpp"
#include "femtoloss/propagation.hpp"
#include "femtoloss/uplink_power.hpp"

namespace femtoloss {

/// Raw (not mean-removed) second-order statistics of x and P_r.
template <typename Scalar = double>
struct CorrelationSystem {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Vector cross;    // E[x P_r,i]
    Matrix autocorr; // E[P_r,i1 P_r,i2]
};

/// With a_i = E[P_t,i], b_i = E[P_t,i^2] and E|h|^2 = 1, E|h|^4 = 2,
/// E[P_N] = sigma2, E[P_N^2] = 3 sigma2^2:
///   cross(i)     = a_i E[x^2] + sigma2 E[x]
///   auto(i, i)   = 2 b_i E[x^2] + 2 a_i E[x] sigma2 + 3 sigma2^2
///   auto(i, j)   = a_i a_j E[x^2] + (a_i + a_j) E[x] sigma2 + sigma2^2
template <typename Scalar>
CorrelationSystem<Scalar> build_correlations(const PowerStats<Scalar>& stats, const GeometryPrior<Scalar>& prior,
                                             Scalar noise_power) {
    using Vector = typename CorrelationSystem<Scalar>::Vector;
    const Eigen::Index n = stats.size();
    if (n < 1 || stats.mean_square.size() != n) {
        throw InputError("power statistics must be non-empty and consistent");
    }
    const Scalar x1 = prior.x_mean;
    const Scalar x2 = prior.x_mean_square;
    const Scalar s2 = noise_power;
    const auto& a = stats.mean;
    const Vector ones = Vector::Ones(n);

    CorrelationSystem<Scalar> sys;
    sys.cross = x2 * a + Vector::Constant(n, s2 * x1);
    sys.autocorr = x2 * (a * a.transpose()) + (x1 * s2) * (a * ones.transpose() + ones * a.transpose());
    sys.autocorr.array() += s2 * s2;
    // a*a^T is not bitwise symmetric after the blocked product.
    sys.autocorr = (sys.autocorr + sys.autocorr.transpose().eval()) * Scalar(0.5);
    sys.autocorr.diagonal() =
        Scalar(2) * x2 * stats.mean_square + Scalar(2) * x1 * s2 * a + Vector::Constant(n, Scalar(3) * s2 * s2);
    return sys;
}

template <typename Scalar = double>
struct LinearEstimate {
    Scalar x_hat{};
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
    Scalar condition_estimate{};  // 1-norm estimate from the factorization
    bool regularized = false;
    Scalar ridge{};
};

inline constexpr double kMaxConditionNumber = 1e12;

/// Linear MMSE estimate x_hat = w^T P_r with auto * w = cross, solved by
/// LDL^T. Ill-conditioned systems get a ridge of 1e-10 * mean(diag).
template <typename Scalar>
LinearEstimate<Scalar> estimate_x(const CorrelationSystem<Scalar>& sys,
                                  const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& received) {
    using Matrix = typename CorrelationSystem<Scalar>::Matrix;
    const Eigen::Index n = sys.cross.size();
    if (received.size() != n || sys.autocorr.rows() != n || sys.autocorr.cols() != n) {
        throw InputError("received power length must match the correlation system");
    }
    if ((received.array() < Scalar(0)).any()) {
        throw InputError("received powers must be non-negative");
    }

    // Normalized copy: entries are O(1) whatever the absolute power scale.
    const Scalar scale = sys.autocorr.diagonal().mean();
    if (!(scale > Scalar(0)) || !std::isfinite(scale)) {
        throw NumericError("auto-correlation diagonal is not positive");
    }
    Matrix normalized = sys.autocorr / scale;

    LinearEstimate<Scalar> out;
    Eigen::LDLT<Matrix> ldlt(normalized);
    Scalar rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : Scalar(0);
    out.condition_estimate = rcond > Scalar(0) ? Scalar(1) / rcond : std::numeric_limits<Scalar>::infinity();

    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || out.condition_estimate > Scalar(kMaxConditionNumber)) {
        out.regularized = true;
        out.ridge = Scalar(1e-10) * scale;
        normalized.diagonal().array() += Scalar(1e-10);
        ldlt.compute(normalized);
        if (ldlt.info() != Eigen::Success) {
            throw NumericError("regularized auto-correlation solve failed");
        }
        rcond = ldlt.rcond();
        out.condition_estimate = rcond > Scalar(0) ? Scalar(1) / rcond : std::numeric_limits<Scalar>::infinity();
    }

    out.weights = ldlt.solve(sys.cross / scale);
    if (!out.weights.allFinite()) {
        throw NumericError("LMMSE weights are not finite");
    }
    out.x_hat = out.weights.dot(received);
    return out;
}

template <typename Scalar = double>
struct PathLossFromX {
    Scalar loss{};
    bool clamped = false;
};

/// L_ps = 1 / x_hat. Estimates at or below 1 / L(2 R0) are replaced by
/// L(2 R0), the largest loss two points in the cell can have.
template <typename Scalar>
PathLossFromX<Scalar> pathloss_from_x(Scalar x_hat, const PropagationModel<Scalar>& model, Scalar cell_radius) {
    const Scalar ceiling = model.loss(Scalar(2) * cell_radius);
    const Scalar floor = Scalar(1) / ceiling;
    if (!(x_hat > floor)) {
        return {ceiling, true};
    }
    return {Scalar(1) / x_hat, false};
}

}  // namespace femtoloss
