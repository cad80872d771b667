#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace dstbc {

// Small counter-friendly PRNG (splitmix64 step function). Simulation code
// derives one independent stream per (seed, point, trial), which makes every
// result bit-identical regardless of how trials are scheduled across
// threads.
class SplitMix {
   public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so it is safe under log().
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard circular complex Gaussian CN(0, 1).
    std::complex<double> cn01() {
        const double mag = std::sqrt(-std::log(uniform01()));
        const double ph = 2.0 * M_PI * uniform01();
        return std::polar(mag, ph);
    }

    // Real N(0, 1).
    double gauss() {
        const double mag = std::sqrt(-2.0 * std::log(uniform01()));
        return mag * std::cos(2.0 * M_PI * uniform01());
    }

   private:
    std::uint64_t state_;
};

// Deterministic stream key for (seed, point, trial, lane).
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t point, std::uint64_t trial,
                                std::uint64_t lane = 0) {
    SplitMix mix(seed ^ (point * 0xd1342543de82ef95ull) ^ (trial * 0xaf251af3b0f025b5ull) ^
                 (lane * 0x9e3779b97f4a7c15ull));
    mix.next_u64();
    return mix.next_u64();
}

}  // namespace dstbc
