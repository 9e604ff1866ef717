#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace riskdp {

/**
 * Reproducibility contract: every random quantity in this library is produced
 * by std::mt19937_64 (whose output sequence the C++ standard fixes exactly)
 * fed through the transformations below. Standard-library distributions are
 * deliberately avoided because their algorithms are implementation-defined,
 * so the same seed gives the same numbers on every platform.
 */

/// SplitMix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for the given stream of a root seed; streams are decorrelated
/// by mixing before and after the combination.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 1));
}

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal via the Box-Muller cosine branch; consumes exactly two
/// generator draws per call.
inline double standard_normal(std::mt19937_64& gen) {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double u1 = 1.0 - uniform01(gen);  // in (0, 1], keeps the log finite
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

/// Index drawn from the weights by inverse CDF in ascending index order.
/// Weights are assumed to sum to one within 1e-9; the last index absorbs the
/// rounding remainder.
inline std::size_t sample_index(std::mt19937_64& gen, const std::vector<double>& weights) {
    if (weights.empty()) {
        throw std::invalid_argument("sample_index: no weights");
    }
    const double u = uniform01(gen);
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) {
            return i;
        }
    }
    return weights.size() - 1;
}

}  // namespace riskdp
