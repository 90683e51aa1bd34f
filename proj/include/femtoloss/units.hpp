#pragma once

#include <cmath>

namespace femtoloss {

template <typename Scalar>
inline Scalar db_to_linear(Scalar db) {
    return std::pow(Scalar(10), db / Scalar(10));
}

template <typename Scalar>
inline Scalar linear_to_db(Scalar linear) {
    return Scalar(10) * std::log10(linear);
}

template <typename Scalar>
inline Scalar dbm_to_watt(Scalar dbm) {
    return db_to_linear(dbm - Scalar(30));
}

template <typename Scalar>
inline Scalar watt_to_dbm(Scalar watt) {
    return linear_to_db(watt) + Scalar(30);
}

}  // namespace femtoloss
