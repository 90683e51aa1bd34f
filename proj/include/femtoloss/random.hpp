#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace femtoloss {

/// Mixes a stream id into a root seed (splitmix64 finalizer on both).
/// Distinct (root, stream) pairs give decorrelated 64-bit seeds.
inline std::uint64_t derive_stream_seed(std::uint64_t root, std::uint64_t stream) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(root) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL));
}

/// One independent random stream. Not shared between threads.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    RandomStream substream(std::uint64_t id) { return RandomStream(derive_stream_seed(engine_(), id)); }

    /// |h|^2 for Rayleigh fading: CDF 1 - exp(-y), unit mean.
    double fading_gain() { return unit_exponential_(engine_); }

    /// sigma2 * chi^2 with one degree of freedom.
    double noise_power(double sigma2) {
        const double z = standard_normal_(engine_);
        return sigma2 * z * z;
    }

    double uniform() { return uniform_(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::exponential_distribution<double> unit_exponential_{1.0};
    std::normal_distribution<double> standard_normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline Eigen::VectorXd sample_fading_gain(RandomStream& rng, Eigen::Index n) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = rng.fading_gain();
    }
    return out;
}

inline Eigen::VectorXd sample_noise_power(RandomStream& rng, double sigma2, Eigen::Index n) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = rng.noise_power(sigma2);
    }
    return out;
}

}  // namespace femtoloss
