#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace eagleeye {

/// Counter-based generator: draw i of a stream is mix(key + i * gamma),
/// the SplitMix64 output function applied to a Weyl sequence.
///
/// A stream key is derived from (seed, stream id), so independent
/// components of a simulation each get their own stream and adding a
/// component never shifts the draws of another. Normal variates use
/// Box-Muller on two uniforms, which keeps the output identical across
/// standard libraries.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed ^ 0x6a09e667f3bcc909ULL) + stream * kGamma)) {}

    std::uint64_t next() {
        ++counter_;
        return mix(key_ + counter_ * kGamma);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double uniform_open_low() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        const double u1 = uniform_open_low();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t counter() const { return counter_; }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace eagleeye
