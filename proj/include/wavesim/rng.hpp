#pragma once

#include <cstdint>
#include <cmath>
#include <complex>

#include "wavesim/common.hpp"

namespace wavesim {

// splitmix64 step; used both as a PRNG core and to derive independent
// per-worker seeds from (seed, stream indices) without std::seed_seq.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL;
    h ^= splitmix64(s);
    s ^= b * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL;
    h ^= splitmix64(s);
    s ^= c * 0x94d049bb133111ebULL + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    return h;
}

// Deterministic generator: xoshiro-free, self-contained splitmix stream with
// Box-Muller normals so results do not depend on libstdc++ distribution
// internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() {
        return (next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint32_t uniform_u32(std::uint32_t bound) {
        // unbiased enough for simulation purposes
        return static_cast<std::uint32_t>(next_u64() % bound);
    }

    bool bit() { return (next_u64() >> 63) != 0; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do { u1 = uniform(); } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * kPi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // circular complex gaussian with E|z|^2 = 1
    cd cnormal() {
        double re = normal();
        double im = normal();
        return cd(re, im) * 0.7071067811865476;
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace wavesim
