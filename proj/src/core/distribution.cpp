// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/core/distribution.hpp"

#include "ritual/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ritual {

namespace {

void check_id(const TokenDistribution &d, TokenId id) {
    if (id >= d.vocab_size()) {
        throw Error(ErrorCode::InvalidRequest,
                    "token id " + std::to_string(id) + " outside vocabulary of " +
                        std::to_string(d.vocab_size()));
    }
}

// log(sum(exp(x))) over finite entries; -inf when all are masked.
double log_sum_exp(std::span<const double> xs) {
    double hi = kMaskedLogWeight;
    for (double x : xs) {
        hi = std::max(hi, x);
    }
    if (!std::isfinite(hi)) {
        return kMaskedLogWeight;
    }
    double acc = 0.0;
    for (double x : xs) {
        if (std::isfinite(x)) {
            acc += std::exp(x - hi);
        }
    }
    return hi + std::log(acc);
}

} // namespace

TokenDistribution::TokenDistribution(std::vector<double> log_weights) : log_weights_(std::move(log_weights)) {
    if (log_weights_.empty()) {
        throw Error(ErrorCode::ShapeMismatch, "distribution over an empty vocabulary");
    }
    for (double &x : log_weights_) {
        if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
            throw Error(ErrorCode::InvalidParams, "log-weight must be finite or -inf");
        }
    }
}

TokenDistribution TokenDistribution::from_weights(std::span<const double> weights) {
    std::vector<double> logs(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0 || std::isnan(weights[i])) {
            throw Error(ErrorCode::InvalidParams, "negative probability-space weight");
        }
        logs[i] = weights[i] > 0.0 ? std::log(weights[i]) : kMaskedLogWeight;
    }
    return TokenDistribution(std::move(logs));
}

double TokenDistribution::log_weight(TokenId id) const {
    check_id(*this, id);
    return log_weights_[id];
}

double TokenDistribution::probability(TokenId id) const {
    return std::exp(log_weight(id));
}

std::vector<double> TokenDistribution::weights() const {
    std::vector<double> out(log_weights_.size());
    std::transform(log_weights_.begin(), log_weights_.end(), out.begin(), [](double x) { return std::exp(x); });
    return out;
}

bool TokenDistribution::has_finite_entry() const noexcept {
    return std::any_of(log_weights_.begin(), log_weights_.end(), [](double x) { return std::isfinite(x); });
}

bool TokenDistribution::is_masked(TokenId id) const {
    return !std::isfinite(log_weight(id));
}

TokenDistribution normalize(const TokenDistribution &d) {
    const double lse = log_sum_exp(d.log_weights());
    if (!std::isfinite(lse)) {
        throw Error(ErrorCode::AllMasked, "cannot normalize: every entry is masked");
    }
    if (std::abs(lse) <= 1e-12) {
        return d;
    }
    std::vector<double> out(d.log_weights().begin(), d.log_weights().end());
    for (double &x : out) {
        if (std::isfinite(x)) {
            x -= lse;
        }
    }
    return TokenDistribution(std::move(out));
}

TokenId argmax(const TokenDistribution &d) {
    const auto lw = d.log_weights();
    std::size_t best = lw.size();
    for (std::size_t i = 0; i < lw.size(); ++i) {
        if (std::isfinite(lw[i]) && (best == lw.size() || lw[i] > lw[best])) {
            best = i;
        }
    }
    if (best == lw.size()) {
        throw Error(ErrorCode::AllMasked, "argmax of a fully masked distribution");
    }
    return static_cast<TokenId>(best);
}

std::vector<double> linear_combine_weights(std::span<const LinearTerm> terms) {
    if (terms.empty()) {
        throw Error(ErrorCode::ShapeMismatch, "linear_combine needs at least one term");
    }
    const std::size_t n = terms.front().distribution.vocab_size();
    for (const auto &term : terms) {
        if (term.distribution.vocab_size() != n) {
            throw Error(ErrorCode::ShapeMismatch,
                        "vocab sizes differ: " + std::to_string(n) + " vs " +
                            std::to_string(term.distribution.vocab_size()));
        }
    }
    std::vector<double> acc(n, 0.0);
    for (const auto &term : terms) {
        if (term.coefficient == 0.0) {
            continue;
        }
        const auto lw = term.distribution.log_weights();
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += term.coefficient * std::exp(lw[i]);
        }
    }
    return acc;
}

TokenDistribution linear_combine(std::span<const LinearTerm> terms, std::optional<std::size_t> mask_source) {
    auto acc = linear_combine_weights(terms);
    if (mask_source && *mask_source >= terms.size()) {
        throw Error(ErrorCode::InvalidParams, "mask source index out of range");
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const bool masked = mask_source && terms[*mask_source].distribution.is_masked(static_cast<TokenId>(i));
        out[i] = (!masked && acc[i] > 0.0) ? std::log(acc[i]) : kMaskedLogWeight;
    }
    return TokenDistribution(std::move(out));
}

} // namespace ritual
