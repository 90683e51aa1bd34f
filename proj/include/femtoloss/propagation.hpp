#pragma once

#include <cmath>
#include <stdexcept>

#include "femtoloss/units.hpp"

namespace femtoloss {

/// Power-law path loss L(d) = L0 * d^alpha, all quantities linear.
///
/// The log-distance form `A + 10*alpha*log10(d)` dB maps to L0 = 10^(A/10).
template <typename Scalar = double>
class PropagationModel {
public:
    PropagationModel(Scalar unit_loss, Scalar exponent) : unit_loss_(unit_loss), exponent_(exponent) {
        if (!(unit_loss > Scalar(0)) || !(exponent > Scalar(0))) {
            throw std::domain_error("PropagationModel: L0 and alpha must be positive");
        }
    }

    static PropagationModel from_db(Scalar unit_loss_db, Scalar exponent) {
        return PropagationModel(db_to_linear(unit_loss_db), exponent);
    }

    Scalar unit_loss() const { return unit_loss_; }
    Scalar unit_loss_db() const { return linear_to_db(unit_loss_); }
    Scalar exponent() const { return exponent_; }

    Scalar loss(Scalar distance_m) const {
        if (!(distance_m > Scalar(0))) {
            throw std::domain_error("path loss requested at non-positive distance");
        }
        return unit_loss_ * std::pow(distance_m, exponent_);
    }

    Scalar loss_db(Scalar distance_m) const {
        if (!(distance_m > Scalar(0))) {
            throw std::domain_error("path loss requested at non-positive distance");
        }
        return unit_loss_db() + Scalar(10) * exponent_ * std::log10(distance_m);
    }

    /// Inverse of loss(): the distance at which the model yields `loss`.
    Scalar distance_of(Scalar loss) const {
        if (!(loss > Scalar(0))) {
            throw std::domain_error("distance requested for non-positive loss");
        }
        return std::pow(loss / unit_loss_, Scalar(1) / exponent_);
    }

private:
    Scalar unit_loss_;
    Scalar exponent_;
};

template <typename Scalar>
inline Scalar path_loss(const PropagationModel<Scalar>& model, Scalar distance_m) {
    return model.loss(distance_m);
}

}  // namespace femtoloss
