#pragma once

#include <cstdint>

namespace heavenly {

/// Counter-based deterministic generator. Draw k of stream `seed` is a
/// splitmix64-style hash of (seed, k): no sequential state, identical output
/// for identical (seed, counter) on every platform, trivially parallel.
struct CounterRng {
    std::uint64_t seed = 0;

    double uniform(std::uint64_t counter) const {
        std::uint64_t x = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return static_cast<double>(x >> 11) * 0x1.0p-53; // [0, 1), 53 bits
    }

    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + uniform(counter) * (hi - lo);
    }
};

} // namespace heavenly
