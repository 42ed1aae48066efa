// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>

namespace ritual {

/// SplitMix64 (Steele, Lea, Flood 2014) as a counter-based generator.
///
/// The k-th output (k >= 1) of `Rng(seed)` is `mix(seed + k * kGamma)`, so any
/// element of a stream can be computed directly with `at(seed, k - 1)`. This is
/// what lets the image kernels draw per-pixel noise in parallel while staying
/// bit-identical to a serial walk of the stream.
///
/// All derived draws (uniform, normal, bounded integers) are defined here in
/// terms of `next_u64` only, never through `<random>` distributions, whose
/// output is implementation-defined.
class Rng {
public:
    using result_type = std::uint64_t;

    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Element `counter` (0-based) of the stream keyed by `key`.
    static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
        return mix(key + (counter + 1) * kGamma);
    }

    /// 53-bit uniform in [0, 1).
    static constexpr double to_unit(std::uint64_t bits) noexcept {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1) on the 52-bit midpoint grid; the top value 1 - 2^-53
    /// is exactly representable, so the result never rounds up to 1.
    static constexpr double to_open_unit(std::uint64_t bits) noexcept {
        return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Standard normal from two stream elements (Box-Muller, cosine branch).
    static double normal_at(std::uint64_t key, std::uint64_t index) noexcept;

    std::uint64_t next_u64() noexcept {
        state_ += kGamma;
        return mix(state_);
    }

    result_type operator()() noexcept {
        return next_u64();
    }

    static constexpr result_type min() noexcept {
        return 0;
    }

    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    double uniform01() noexcept {
        return to_unit(next_u64());
    }

    double uniform_open01() noexcept {
        return to_open_unit(next_u64());
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Unbiased integer in [0, n) by rejection. n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept;

    double normal() noexcept;

    /// Independent child stream keyed by the next output of this one.
    Rng fork() noexcept {
        return Rng(next_u64());
    }

private:
    std::uint64_t state_;
};

} // namespace ritual
