#pragma once

#include <cstdint>

namespace wismc {

/// SplitMix64 counter generator (Steele, Lea & Flood). The state walks a
/// fixed odd increment and each output is a bijective hash of the counter,
/// so a (seed, stream id) pair always reproduces the same sequence and
/// distinct stream ids give decorrelated streams. Used for every random
/// draw in the library; simulation path p draws from stream(seed, p).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Stream `id` derived from a master seed.
    static Rng stream(std::uint64_t master_seed, std::uint64_t id) {
        return Rng(mix(master_seed + kGamma * (id + 1)));
    }

    std::uint64_t next_u64() {
        state_ += kGamma;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    std::uint64_t state_;
};

/// Order-sensitive 64-bit hash combiner for deriving stream ids from
/// structured keys (e.g. a sweep cell's lambda bits and memory value).
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return Rng::mix(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

}  // namespace wismc
