// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace ritual {

double Rng::normal_at(std::uint64_t key, std::uint64_t index) noexcept {
    const double u1 = to_open_unit(at(key, 2 * index));
    const double u2 = to_unit(at(key, 2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
    // Reject the tail [limit, 2^64) so every residue is equally likely.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x = next_u64();
    while (x >= limit) {
        x = next_u64();
    }
    return x % n;
}

double Rng::normal() noexcept {
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace ritual
