#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace framekernel {

/// Reproducible standard-normal stream, version 1.
///
/// Uniforms come from SplitMix64 (Steele, Lea & Flood 2014) started at
/// mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019); a 64-bit output z maps to
/// ((z >> 11) + 1) * 2^-53 in (0, 1]. Normals are produced in pairs by the basic
/// Box-Muller transform r = sqrt(-2 ln u1), (r cos(2 pi u2), r sin(2 pi u2)),
/// cosine branch first. Changing any of this changes every stored sample set.
class NormalStream {
public:
    static constexpr int kVersion = 1;

    explicit NormalStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL)) {}

    static constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    /// Uniform in (0, 1].
    double next_uniform() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace framekernel
