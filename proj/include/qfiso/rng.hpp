#pragma once

#include <cstdint>

namespace qfiso {

inline uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-derived RNG stream: each (seed, stream index) pair yields an
/// independent deterministic stream, so Monte Carlo results do not depend on
/// how samples are partitioned across workers.
class SampleRng {
public:
    SampleRng(uint64_t seed, uint64_t stream)
        : state_(splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL) ^
                 splitmix64_mix(stream + 0x632BE59BD9B4E019ULL)) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

    // Unbiased draw from [0, bound) by rejection.
    uint64_t bounded(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        while (true) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

private:
    uint64_t state_;
};

}  // namespace qfiso
