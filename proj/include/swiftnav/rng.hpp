#pragma once

#include <cstdint>
#include <cmath>

#include "swiftnav/geometry.hpp"

namespace swiftnav {

// splitmix64; used to derive independent stream seeds from a master seed.
inline uint64_t hash_mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t index = 0) {
    return hash_mix(hash_mix(master ^ (stream * 0x9E3779B97F4A7C15ULL)) + index);
}

// Deterministic generator (xoshiro256**). Distributions are hand-rolled so
// sequences are identical across standard libraries and platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t z = seed;
        for (auto& w : s_) w = hash_mix(z++);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal via Box-Muller (no caching, two draws per value).
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Uniform in the closed disc of given radius.
    Vec2 in_disc(double radius) {
        const double r = radius * std::sqrt(uniform01());
        const double a = uniform(0.0, 2.0 * kPi);
        return {r * std::cos(a), r * std::sin(a)};
    }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return next() % n; }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace swiftnav
