#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

/// Uniform draw in [0, 1) from the top 53 bits of the generator output.
/// Used instead of std::uniform_real_distribution so that seeded runs are
/// bit-identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential draw with the given rate; uses -log(1 - U) so U == 0 is safe.
inline double exponential_draw(std::mt19937_64& rng, double rate) {
    return -std::log1p(-uniform01(rng)) / rate;
}

/// splitmix64 step; decorrelates derived seeds (e.g. per-restart streams).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace hawkes
