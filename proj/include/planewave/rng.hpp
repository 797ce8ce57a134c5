// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, realization, counter), so results do not depend on thread
// scheduling or iteration order.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "planewave/geometry.hpp"

namespace pw {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream identifiers for the synthesis draws.
enum : std::uint64_t {
    kStreamPP = 0,  // upgoing/upgoing block; the scalar model shares it
    kStreamPM = 1,
    kStreamMP = 2,
    kStreamMM = 3,
    kStreamSampling = 16,
    kStreamScenario = 17,
};

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t realization) {
    std::uint64_t k = mix64(seed ^ 0x5bf03635e31a4e1bULL);
    k = mix64(k ^ mix64(stream ^ 0xc2b2ae3d27d4eb4fULL));
    return mix64(k ^ mix64(realization ^ 0x165667b19e3779f9ULL));
}

inline std::uint64_t counter_u64(std::uint64_t key, std::uint64_t ctr) {
    return mix64(key + ctr * 0x9e3779b97f4a7c15ULL);
}

// Uniform in (0,1).
inline double to_u01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

// Circularly-symmetric complex Gaussian with E|w|^2 = 1 at counter n:
// sqrt(-log u) * exp(i*2*pi*v) from two uniforms.
inline cplx cn01(std::uint64_t key, std::uint64_t n) {
    const double u =
        (static_cast<double>(counter_u64(key, 2 * n) >> 11) + 1.0) * 0x1p-53;
    const double v = to_u01(counter_u64(key, 2 * n + 1));
    const double r = std::sqrt(-std::log(u));
    return {r * std::cos(2.0 * pi * v), r * std::sin(2.0 * pi * v)};
}

// Sequential convenience handle over one counter stream.
struct Rng {
    std::uint64_t key = 0;
    std::uint64_t ctr = 0;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = kStreamSampling,
                 std::uint64_t realization = 0)
        : key(stream_key(seed, stream, realization)) {}

    double u01() { return to_u01(counter_u64(key, ctr++)); }
};

}  // namespace pw
