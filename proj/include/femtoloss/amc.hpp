#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace femtoloss {

struct AmcMode {
    int index = 0;             // 1-based sequence number
    double min_sinr = 0.0;     // linear power ratio
    std::string label;
};

/// Ordered modulation/coding modes, each with the minimum SINR it requires.
///
/// Modes are numbered 1..M with strictly increasing thresholds. The
/// threshold above mode M is +inf.
class AmcTable {
public:
    explicit AmcTable(std::vector<AmcMode> modes);

    /// Seven 802.16e-style modes, thresholds {3, 6, 8.5, 11.5, 15, 19, 21} dB.
    static AmcTable default_table();

    /// One mode per line: "index threshold_db label". '#' starts a comment.
    static AmcTable parse(std::istream& in);
    static AmcTable load(const std::filesystem::path& path);

    int size() const { return static_cast<int>(modes_.size()); }
    const std::vector<AmcMode>& modes() const { return modes_; }
    const AmcMode& mode(int m) const;

    /// Omega(m), linear.
    double threshold(int m) const;
    /// Omega(m + 1), with Omega(M + 1) = +inf.
    double upper_threshold(int m) const;
    bool valid_mode(int m) const { return m >= 1 && m <= size(); }

    /// Largest m with Omega(m) <= sinr. SINR below Omega(1) still maps to mode 1.
    int assign_mode(double sinr) const;

private:
    std::vector<AmcMode> modes_;
};

}  // namespace femtoloss
