#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dpbandit {

// splitmix64, used to derive independent sub-seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(salt)));
}

// Uniform in [0,1). Built from raw bits so draws are pinned to the generator
// state, not to library-specific distribution internals.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0,1]; safe to feed into log().
inline double uniform01_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double gaussian(std::mt19937_64& rng) {
    // Box-Muller; draws two uniforms per call.
    double u1 = uniform01_open(rng);
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace dpbandit
