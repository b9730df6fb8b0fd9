#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ersr {

// Seeded draws with hand-rolled distributions so that identical seeds give
// identical streams regardless of standard-library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// Independent substream for (seed, index) pairs, order-insensitive.
    static Rng derive(std::uint64_t seed, std::uint64_t index) {
        // splitmix64 over the pair
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace ersr
