#ifndef COOPDSTC_RANDOM_HPP
#define COOPDSTC_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "coopdstc/common.hpp"

namespace coopdstc {

// std::mt19937_64 output is fully specified by the standard, but the std
// distributions are not. The helpers below turn raw engine output into
// uniforms/normals the same way on every standard library, which keeps the
// golden CSV files stable across toolchains.
using Rng = std::mt19937_64;

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform in (0, 1].
inline double uniform_open_closed(Rng& rng) { return 1.0 - uniform01(rng); }

inline bool fair_coin(Rng& rng) { return (rng() >> 63) != 0; }

inline Symbol random_bpsk(Rng& rng) { return fair_coin(rng) ? Symbol{1} : Symbol{-1}; }

/// Circularly-symmetric complex Gaussian with E|z|^2 = variance (Box-Muller).
inline cd complex_gaussian(Rng& rng, double variance)
{
    const double radius = std::sqrt(-std::log(uniform_open_closed(rng)) * variance);
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Independent sub-stream keyed by (seed, a, b, c) via std::seed_seq.
Rng derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

} // namespace coopdstc

#endif // COOPDSTC_RANDOM_HPP
