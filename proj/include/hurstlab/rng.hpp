#pragma once

#include <cmath>
#include <cstdint>

namespace hurstlab {

/// SplitMix64 (Steele, Lea & Flood 2014). 64-bit state, one multiply-xorshift
/// finalizer per output. Chosen over std::mt19937_64 + std::normal_distribution
/// because the standard distributions are implementation-defined; this generator
/// plus the Box-Muller transform below gives bit-identical series for a fixed
/// seed on any conforming platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1): top 53 bits of the output word.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1): shifted half a ulp so log() is always finite.
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Standard normal deviates via the basic Box-Muller transform:
///   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
/// with u1 in (0,1), u2 in [0,1). Consumes exactly two uniforms per pair;
/// the sine deviate is cached and returned on the next call.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_open();
        const double u2 = rng_.next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Decorrelated per-stream seed: base and index are combined through one
/// SplitMix64 step so that adjacent indices give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return SplitMix64(base + (index + 1) * 0x9E3779B97F4A7C15ULL).next_u64();
}

}  // namespace hurstlab
