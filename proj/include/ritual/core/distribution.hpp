// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace ritual {

using TokenId = std::uint32_t;

inline constexpr double kMaskedLogWeight = -std::numeric_limits<double>::infinity();

/// Per-token log-weights over a fixed vocabulary.
///
/// Entries are finite or -inf (masked). The value is not required to be
/// normalized; `normalize` produces the normalized form. Operations that need
/// a sampling distribution throw `ErrorCode::AllMasked` when every entry is -inf.
class TokenDistribution {
public:
    explicit TokenDistribution(std::vector<double> log_weights);

    /// Builds log-weights from non-negative probability-space weights (0 maps to -inf).
    static TokenDistribution from_weights(std::span<const double> weights);
    static TokenDistribution from_weights(std::initializer_list<double> weights) {
        return from_weights(std::span<const double>(weights.begin(), weights.size()));
    }

    std::size_t vocab_size() const noexcept {
        return log_weights_.size();
    }

    std::span<const double> log_weights() const noexcept {
        return log_weights_;
    }

    double log_weight(TokenId id) const;
    double probability(TokenId id) const;

    /// exp of every entry, in token order.
    std::vector<double> weights() const;

    bool has_finite_entry() const noexcept;
    bool is_masked(TokenId id) const;

    friend bool operator==(const TokenDistribution &, const TokenDistribution &) = default;

private:
    std::vector<double> log_weights_;
};

/// Renormalizes so that exp(entries) sums to 1. Masked entries stay masked.
/// Inputs already normalized to within 1e-12 are returned unchanged, which
/// makes the operation idempotent bit-for-bit.
TokenDistribution normalize(const TokenDistribution &d);

/// Lowest id among the entries attaining the maximum.
TokenId argmax(const TokenDistribution &d);

struct LinearTerm {
    double coefficient;
    const TokenDistribution &distribution;
};

/// Entry-wise sum of coefficient * exp(log_weights) in probability space.
///
/// Entries masked in `terms[mask_source]` stay masked; resulting weights <= 0
/// are clamped to zero (masked). The result is not normalized.
TokenDistribution linear_combine(std::span<const LinearTerm> terms,
                                 std::optional<std::size_t> mask_source = 0);

inline TokenDistribution linear_combine(std::initializer_list<LinearTerm> terms,
                                        std::optional<std::size_t> mask_source = 0) {
    return linear_combine(std::span<const LinearTerm>(terms.begin(), terms.size()), mask_source);
}

/// Unclamped probability-space combination, for callers that need to see the
/// signed weights before clamping.
std::vector<double> linear_combine_weights(std::span<const LinearTerm> terms);

} // namespace ritual
