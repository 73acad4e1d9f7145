//==============================================================================
//  rng.hpp
//
//  Counter-based deterministic random numbers.  Every draw is a pure function
//  of (seed, counter): out_i = mix64(seed + i * 0x9E3779B97F4A7C15), the
//  splitmix64 finalizer over a Weyl sequence.  No hidden state beyond the
//  counter, so draws are reproducible and order-independent across threads
//  that use disjoint counter ranges.
//==============================================================================
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace schrec {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() {
        return mix64(seed_ + (counter_++) * 0x9E3779B97F4A7C15ull);
    }

    // Uniform in (0, 1]: 53 mantissa bits, zero excluded so logs are safe.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; two counter draws per call, no cached
    // spare, so the value depends only on the counter positions consumed.
    double next_gaussian() {
        double u1 = next_uniform();
        double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::complex<double> next_complex_gaussian() {
        double re = next_gaussian();
        double im = next_gaussian();
        return {re, im};
    }

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace schrec
