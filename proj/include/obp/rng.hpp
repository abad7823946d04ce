#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace obp {

// All randomness flows through Rng so that streams are reproducible bit for bit
// across standard libraries: only the raw mt19937_64 output is consumed, never
// the implementation-defined std:: distributions.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Purposes a repetition draws randomness for. Values are part of the stream
// derivation and must never be renumbered.
enum class Stream : std::uint64_t {
    Means = 1,        // instance means drawn from a uniform family
    Realization = 2,  // arm availabilities, shared by every policy (common random numbers)
    Policy = 3,       // internal randomization of a policy (per player: + player index)
    Oracle = 4,       // instance sampling in oracle checks
};

// Seed of the substream for (repetition, purpose, lane):
//   mix64(mix64(mix64(master) ^ repetition) ^ (purpose << 32 | lane)).
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t repetition, Stream purpose,
                                       std::uint64_t lane = 0) noexcept {
    const auto tag = (static_cast<std::uint64_t>(purpose) << 32) | (lane & 0xffffffffULL);
    return mix64(mix64(mix64(master) ^ repetition) ^ tag);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t repetition, Stream purpose, std::uint64_t lane = 0) {
    return Rng{substream_seed(master, repetition, purpose, lane)};
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

// Uniform integer in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - (Rng::max() % n + 1) % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x > limit);
    return x % n;
}

template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[uniform_index(rng, i)]);
    }
}

}  // namespace obp
