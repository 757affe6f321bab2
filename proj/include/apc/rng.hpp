#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace apc {

// All sampling goes through mt19937_64 plus the helpers below. The standard
// fully specifies the mt19937_64 output stream, while uniform_int_distribution
// is implementation-defined; hand-rolling the bounded draw keeps sampled
// streams identical across platforms and compilers.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Unbiased draw from [0, bound), by rejection on the raw 64-bit stream.
inline std::uint64_t next_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double next_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace apc
