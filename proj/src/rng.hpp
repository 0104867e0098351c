#ifndef MPP_RNG_HPP
#define MPP_RNG_HPP

#include <cmath>
#include <cstdint>

#include "hash.hpp"

namespace mpp {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Small counter-based generator (splitmix64 stream). Self-contained so
/// that identical seeds reproduce identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        return mix64(state_ += 0x9E3779B97F4A7C15ULL);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Zero-mean Gaussian draw (Box-Muller, one value per call).
    double normal(double sigma = 1.0) noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        return sigma * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Poisson draw by Knuth's product method; fine for small means.
    std::uint32_t poisson(double mean) noexcept {
        const double limit = std::exp(-mean);
        std::uint32_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

private:
    std::uint64_t state_;
};

/// Per-trial sub-seed: chain the prefix hash over the 64 bits of the trial
/// index (most significant first). Trials can then run in any order.
constexpr std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t s = hash_init(master);
    for (int b = 63; b >= 0; --b) {
        s = hash_update(s, static_cast<int>((index >> b) & 1u));
    }
    return s;
}

} // namespace mpp

#endif // MPP_RNG_HPP
