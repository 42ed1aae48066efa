// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/decoding/fusion.hpp"

#include "ritual/core/error.hpp"

#include <algorithm>
#include <cmath>

namespace ritual {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": vocab sizes " + std::to_string(a) + " and " +
                                                  std::to_string(b) + " differ");
    }
}

// Zeroes non-admitted and negative weights, then renormalizes; falls back to
// the masked original when nothing positive remains.
TokenDistribution finish(std::vector<double> weights, const PlausibilityMask &mask, const TokenDistribution &original) {
    require_same_size(weights.size(), mask.vocab_size(), "mask");
    bool any_positive = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!mask.admits(static_cast<TokenId>(i)) || !(weights[i] > 0.0)) {
            weights[i] = 0.0;
        } else {
            any_positive = true;
        }
    }
    if (!any_positive) {
        return mask.apply(original);
    }
    return normalize(TokenDistribution::from_weights(weights));
}

} // namespace

PlausibilityMask::PlausibilityMask(std::vector<bool> admitted) : admitted_(std::move(admitted)) {}

bool PlausibilityMask::admits(TokenId id) const {
    if (id >= admitted_.size()) {
        throw Error(ErrorCode::InvalidRequest, "token id " + std::to_string(id) + " outside mask");
    }
    return admitted_[id];
}

std::size_t PlausibilityMask::admitted_count() const noexcept {
    return static_cast<std::size_t>(std::count(admitted_.begin(), admitted_.end(), true));
}

TokenDistribution PlausibilityMask::apply(const TokenDistribution &d) const {
    require_same_size(d.vocab_size(), admitted_.size(), "mask");
    std::vector<double> lw(d.log_weights().begin(), d.log_weights().end());
    for (std::size_t i = 0; i < lw.size(); ++i) {
        if (!admitted_[i]) {
            lw[i] = kMaskedLogWeight;
        }
    }
    bool any = std::any_of(lw.begin(), lw.end(), [](double x) { return std::isfinite(x); });
    if (!any) {
        throw Error(ErrorCode::AllMasked, "no admitted token has positive probability");
    }
    return normalize(TokenDistribution(std::move(lw)));
}

PlausibilityMask plausibility_mask(const TokenDistribution &base, double beta, std::optional<TokenId> always_admit) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw Error(ErrorCode::InvalidParams, "beta must lie in [0, 1]");
    }
    const TokenDistribution p = normalize(base);
    const auto lw = p.log_weights();
    const double top = *std::max_element(lw.begin(), lw.end());
    const double threshold = beta * std::exp(top);
    std::vector<bool> admitted(lw.size());
    for (std::size_t i = 0; i < lw.size(); ++i) {
        admitted[i] = std::isfinite(lw[i]) && std::exp(lw[i]) >= threshold;
    }
    if (always_admit) {
        if (*always_admit >= lw.size()) {
            throw Error(ErrorCode::InvalidRequest, "always-admitted id outside vocabulary");
        }
        admitted[*always_admit] = true;
    }
    return PlausibilityMask(std::move(admitted));
}

TokenDistribution fuse_ritual(const TokenDistribution &p_orig, const TokenDistribution &p_trans, double alpha,
                              const PlausibilityMask &mask) {
    require_same_size(p_orig.vocab_size(), p_trans.vocab_size(), "fuse_ritual");
    const LinearTerm terms[] = {{1.0, p_orig}, {alpha, p_trans}};
    return finish(linear_combine_weights(terms), mask, p_orig);
}

TokenDistribution fuse_vcd(const TokenDistribution &p_orig, const TokenDistribution &p_distorted, double gamma,
                           double delta, const PlausibilityMask &mask) {
    require_same_size(p_orig.vocab_size(), p_distorted.vocab_size(), "fuse_vcd");
    const LinearTerm terms[] = {{gamma, p_orig}, {-delta, p_distorted}};
    return finish(linear_combine_weights(terms), mask, p_orig);
}

double m3id_weight(double lambda, std::size_t t) {
    return std::expm1(lambda * static_cast<double>(t));
}

TokenDistribution fuse_m3id(const TokenDistribution &p_cond, const TokenDistribution &p_uncond, double lambda,
                            std::size_t t, const PlausibilityMask &mask) {
    require_same_size(p_cond.vocab_size(), p_uncond.vocab_size(), "fuse_m3id");
    if (t < 1) {
        throw Error(ErrorCode::InvalidParams, "m3id step index starts at 1");
    }
    const double w = m3id_weight(lambda, t);
    const LinearTerm terms[] = {{1.0 + w, p_cond}, {-w, p_uncond}};
    return finish(linear_combine_weights(terms), mask, p_cond);
}

TokenDistribution fuse_combined(const TokenDistribution &p_trans, const TokenDistribution &d_fused, double zeta,
                                const PlausibilityMask &mask) {
    require_same_size(p_trans.vocab_size(), d_fused.vocab_size(), "fuse_combined");
    const LinearTerm terms[] = {{zeta, p_trans}, {1.0, d_fused}};
    return finish(linear_combine_weights(terms), mask, d_fused);
}

TokenId sample(const TokenDistribution &d, Sampler sampler, Rng &rng) {
    if (sampler == Sampler::Greedy) {
        return argmax(d);
    }
    const TokenDistribution p = normalize(d);
    const auto lw = p.log_weights();
    const double u = rng.uniform01();
    double cumulative = 0.0;
    std::optional<TokenId> last;
    for (std::size_t i = 0; i < lw.size(); ++i) {
        if (!std::isfinite(lw[i])) {
            continue;
        }
        last = static_cast<TokenId>(i);
        cumulative += std::exp(lw[i]);
        if (u < cumulative) {
            return static_cast<TokenId>(i);
        }
    }
    // Rounding left the cumulative sum a hair below u.
    return *last;
}

} // namespace ritual
