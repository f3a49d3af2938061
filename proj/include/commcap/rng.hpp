#pragma once

#include <cstdint>

namespace commcap {

// Counter-based randomness: every output is a pure function of
// (seed, stream, counter).  Values can therefore be generated in any
// order or in parallel and still come out identical, which is what the
// reproducibility contracts of the random-table, restart-sampling and
// trial-seeding code rely on.

// SplitMix64 finalizer (Stafford mix13).
constexpr uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// 64 random bits at position `counter` of stream `stream` under `seed`.
constexpr uint64_t counter_rand(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t h = mix64(seed + kGolden * (stream + 1));
    return mix64(h + kGolden * (counter + 1));
}

// Uniform double in [0, 1), 53 mantissa bits.
constexpr double counter_uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
    return static_cast<double>(counter_rand(seed, stream, counter) >> 11) * 0x1.0p-53;
}

}  // namespace commcap
