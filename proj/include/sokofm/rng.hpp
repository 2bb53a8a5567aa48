#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "sokofm/engine.hpp"

namespace sokofm {

// All randomness goes through mt19937_64 (whose output sequence is fixed by
// the standard) and the helpers below, so runs are reproducible bit-for-bit
// across platforms for a given seed.
using Rng = std::mt19937_64;

/// splitmix64 finalizer; decorrelates structured seed material.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a base seed and a task path such as
/// {purpose, level_index, repeat_index}.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(base);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
    return h;
}

/// Unbiased uniform draw from [0, n) (Lemire's multiply-shift rejection).
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t n) {
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform_real(rng) < p; }

inline Action random_action(Rng& rng) {
    return static_cast<Action>(uniform_int(rng, kActionCount));
}

/// A uniformly random action different from `a`.
inline Action random_other_action(Rng& rng, Action a) {
    auto r = static_cast<std::uint8_t>(uniform_int(rng, kActionCount - 1));
    if (r >= static_cast<std::uint8_t>(a)) ++r;
    return static_cast<Action>(r);
}

}  // namespace sokofm
