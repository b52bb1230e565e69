#pragma once

#include <cmath>
#include <cstdint>

namespace recirc {

// SplitMix64 stream. Streams are forked by key rather than shared, so the
// numbers a rollout sees never depend on evaluation order or worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller without the cached spare, so consumption per call is fixed.
    double normal() {
        constexpr double two_pi = 6.283185307179586476925286766559;
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::uint64_t state_;
};

// Child seed for a keyed subtree of the seed hierarchy.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
    Rng r(parent ^ (0x9E3779B97F4A7C15ULL * (key + 0x632BE59BD9B4E019ULL)));
    return r.next_u64();
}

}  // namespace recirc
