#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "femtoloss/amc.hpp"
#include "femtoloss/propagation.hpp"

namespace femtoloss {

enum class UplinkPolicy {
    AmcDriven,    // PU targets Omega(m_u) of the broadcast uplink mode
    FixedTarget,  // PU targets a fixed SINR regardless of m_u
};

enum class DuplexMode { Tdd, Fdd };

struct Duplex {
    DuplexMode mode = DuplexMode::Tdd;
    double fdd_offset_db = 0.0;  // uplink loss minus downlink loss, FDD only
};

/// Physical and protocol parameters of one macrocell scenario. Powers in W,
/// distances in m, SINRs linear.
struct ScenarioConfig {
    double cell_radius_m = 500.0;
    double min_distance_m = 35.0;
    PropagationModel<double> propagation = PropagationModel<double>::from_db(15.3, 3.76);
    double noise_power_w = 1e-13;
    double bs_power_w = 0.0;
    double pu_min_power_w = 1e-6;
    double pu_max_power_w = 1.5848931924611136;  // 32 dBm
    int observations = 200;
    UplinkPolicy uplink_policy = UplinkPolicy::FixedTarget;
    double target_sinr = 31.622776601683793;  // 15 dB
    Duplex duplex{};
    std::uint64_t seed = 1;
    AmcTable amc = AmcTable::default_table();

    /// Throws ConfigError when an invariant is violated.
    void validate() const;

    double min_loss() const { return propagation.loss(min_distance_m); }
    double max_loss() const { return propagation.loss(cell_radius_m); }

    /// R0 = 500 m, Rmin = 35 m, L(d) = 15.3 + 37.6 log10(d) dB, sigma2 = -100 dBm,
    /// Pmin = -30 dBm, Pmax = 32 dBm, I = 200, fixed 15 dB uplink target, TDD,
    /// P0 calibrated for 12 dB mean SINR at the cell edge.
    static ScenarioConfig defaults();
};

inline constexpr double kFringeSinrDb = 12.0;

/// BS power giving mean downlink SINR `fringe_sinr_db` at the cell edge.
/// E|h|^2 = 1, so mean SINR at R0 is P0 / (sigma2 * L(R0)).
double calibrate_bs_power(const ScenarioConfig& config, double fringe_sinr_db = kFringeSinrDb);

/// Flat "key = value" text. Every documented key is required except
/// target_sinr_db (fixed uplink only), fdd_offset_db (fdd only) and
/// amc_table (defaults to the built-in table). Relative amc_table paths
/// resolve against `base_dir`.
ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace femtoloss
