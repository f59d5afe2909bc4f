#pragma once

#include <cstdint>

namespace hessval {

// Counter-based generator in the SplitMix64 family.  Every draw is a pure
// function of (seed, shard, counter), so parallel shards reproduce the same
// stream regardless of scheduling.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t shard = 0)
        : state_(mix(seed ^ mix(shard + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace hessval
