// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Plausibility masking and the distribution fusion rules.
//
// Every rule combines probabilities (not logits) entry-wise, zeroes tokens
// outside the plausibility mask, clamps negative weights to zero and
// renormalizes. If nothing positive survives inside the mask, the result
// falls back to the masked original distribution, so a fused distribution
// is always defined and always supported inside the mask.

#include "ritual/core/distribution.hpp"
#include "ritual/core/rng.hpp"
#include "ritual/decoding/strategy.hpp"

#include <optional>
#include <vector>

namespace ritual {

/// Set of tokens whose probability under the original-image distribution is
/// at least beta times the maximum probability.
class PlausibilityMask {
public:
    explicit PlausibilityMask(std::vector<bool> admitted);

    std::size_t vocab_size() const noexcept {
        return admitted_.size();
    }
    bool admits(TokenId id) const;
    std::size_t admitted_count() const noexcept;
    const std::vector<bool> &admitted() const noexcept {
        return admitted_;
    }

    /// `d` restricted to the mask and renormalized. Throws AllMasked when no
    /// admitted token has positive probability in `d`.
    TokenDistribution apply(const TokenDistribution &d) const;

    friend bool operator==(const PlausibilityMask &, const PlausibilityMask &) = default;

private:
    std::vector<bool> admitted_;
};

/// `base` need not be normalized; the threshold is relative. `always_admit`
/// (the end-of-sequence id during decoding) is admitted regardless of its
/// probability. Throws InvalidParams unless 0 <= beta <= 1, AllMasked if
/// `base` has no finite entry.
PlausibilityMask plausibility_mask(const TokenDistribution &base, double beta,
                                   std::optional<TokenId> always_admit = std::nullopt);

/// normalize(p_orig + alpha * p_trans) inside the mask built from p_orig.
TokenDistribution fuse_ritual(const TokenDistribution &p_orig, const TokenDistribution &p_trans, double alpha,
                              const PlausibilityMask &mask);

/// normalize(max(0, gamma * p_orig - delta * p_distorted)) inside the mask.
TokenDistribution fuse_vcd(const TokenDistribution &p_orig, const TokenDistribution &p_distorted, double gamma,
                           double delta, const PlausibilityMask &mask);

/// w(t) = (1 - e^{-lambda t}) / e^{-lambda t} = e^{lambda t} - 1.
double m3id_weight(double lambda, std::size_t t);

/// normalize(max(0, p_cond + w(t) (p_cond - p_uncond))) inside the mask; t >= 1.
TokenDistribution fuse_m3id(const TokenDistribution &p_cond, const TokenDistribution &p_uncond, double lambda,
                            std::size_t t, const PlausibilityMask &mask);

/// normalize(zeta * p_trans + d_fused) inside the mask.
TokenDistribution fuse_combined(const TokenDistribution &p_trans, const TokenDistribution &d_fused, double zeta,
                                const PlausibilityMask &mask);

/// Greedy: argmax. Multinomial: one uniform draw from `rng`, inverted through
/// the cumulative distribution in token-id order.
TokenId sample(const TokenDistribution &d, Sampler sampler, Rng &rng);

} // namespace ritual
