// Seedable, portable random number generation.
//
// All sampling in this library goes through Xoshiro256++ seeded via
// SplitMix64, with hand-rolled distribution transforms. The standard
// <random> distributions are implementation-defined, so using them would
// make seeded outputs differ across standard libraries; everything here
// is specified bit-for-bit by this file alone.

#ifndef ALPHAMAX_RNG_HPP
#define ALPHAMAX_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace alphamax {

// SplitMix64 step; used for seeding and for deriving independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives a stream seed from (base_seed, index...) so that parallel trials
// get decorrelated, reproducible generators.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = base;
    std::uint64_t h = splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= b + 0xd1b54a32d192ed03ULL;
    h ^= splitmix64(s);
    return h;
}

// Xoshiro256++ (Blackman & Vigna). 64-bit output, 2^256-1 period.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Standard normal via Box-Muller; the second variate is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Laplace(location, scale) by inverse CDF.
    double laplace(double location, double scale) {
        double u = uniform01() - 0.5;                       // [-0.5, 0.5)
        if (u == -0.5) u = 0.0;                             // avoid log(0)
        const double sign = u < 0.0 ? -1.0 : 1.0;
        return location - scale * sign * std::log(1.0 - 2.0 * std::abs(u));
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace alphamax

#endif  // ALPHAMAX_RNG_HPP
