// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random number generation (Philox4x32-10) plus Gaussian
// sampling. Counter-based generation keeps every draw addressable by
// (seed, stream, counter), so traces are reproducible bit-for-bit across
// reruns and independent of evaluation order; distinct streams derived from
// the same seed are statistically independent.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "wpt/common.hpp"

namespace wpt {

/// splitmix64 finalizer; used to derive well-separated child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Derives a child seed from (seed, salt_a, salt_b). Order-sensitive, so
/// mix_seed(s, trial, block) and mix_seed(s, block, trial) differ.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt_a,
                                 std::uint64_t salt_b = 0) {
    std::uint64_t h = splitmix64(seed ^ 0x243F6A8885A308D3ull);
    h = splitmix64(h ^ salt_a);
    h = splitmix64(h ^ splitmix64(salt_b ^ 0x13198A2E03707344ull));
    return h;
}

// Stream tags keep draws for different purposes independent even when they
// share a seed (e.g. channel matrix vs. beacon noise of the same block).
inline constexpr std::uint64_t kStreamChannel = 0x6368616E6E656Cull;   // "channel"
inline constexpr std::uint64_t kStreamNoise = 0x6E6F697365ull;         // "noise"
inline constexpr std::uint64_t kStreamDistance = 0x64697374ull;        // "dist"
inline constexpr std::uint64_t kStreamFloor = 0x666C6F6F72ull;         // "floor"

/// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
/// easy as 1, 2, 3"). The 128-bit counter is split as
/// {block_lo, block_hi, stream_lo, stream_hi}; the 64-bit key is the seed.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    /// One keyed permutation of a 128-bit counter block; the raw primitive,
    /// exposed so known-answer vectors can be checked directly.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t prod0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t prod1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(prod0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(prod0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(prod1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(prod1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    std::uint32_t next_u32() {
        if (buf_pos_ == 4) refill();
        return buf_[buf_pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; generates pairs and caches the second.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const auto [n0, n1] = gaussian_pair();
        spare_ = n1;
        have_spare_ = true;
        return n0;
    }

    /// Circularly symmetric complex Gaussian CN(0, variance): real and
    /// imaginary parts are independent N(0, variance/2).
    cdouble next_cgaussian(double variance) {
        const auto [n0, n1] = gaussian_pair();
        const double s = std::sqrt(0.5 * variance);
        return {s * n0, s * n1};
    }

private:
    std::pair<double, double> gaussian_pair() {
        const double u1 = next_double();
        const double u2 = next_double();
        // 1 - u1 lies in (0, 1], so the log is finite.
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    void refill() {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buf_ = block(ctr, key_);
        ++counter_;
        buf_pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wpt
