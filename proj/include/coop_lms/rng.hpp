#pragma once

#include <cstdint>
#include <random>

namespace coop_lms {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based seed derivation. Every (trial, stream) pair gets its own
/// generator, so trials can run in any order or in parallel and still draw
/// the same numbers.
///
///   seed = splitmix64(splitmix64(master ^ splitmix64(trial)) + stream)
///
/// Streams used by the harness: 0 = graph sampling, 1 = scenario sampling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                    std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(master ^ splitmix64(trial)) + stream);
}

inline Rng make_stream(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
    return Rng(derive_seed(master, trial, stream));
}

namespace streams {
inline constexpr std::uint64_t graph = 0;
inline constexpr std::uint64_t scenario = 1;
}  // namespace streams

}  // namespace coop_lms
