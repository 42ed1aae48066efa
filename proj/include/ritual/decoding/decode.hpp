// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/core/error.hpp"
#include "ritual/core/rng.hpp"
#include "ritual/decoding/fusion.hpp"
#include "ritual/decoding/strategy.hpp"
#include "ritual/provider/provider.hpp"
#include "ritual/transforms/transform.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ritual {

/// Images and text conditioning one response. The auxiliary images are
/// prepared once, before the first step, and stay fixed for the session.
struct DecodeSession {
    std::shared_ptr<const DigestedImage> image;
    /// T(image; params), present iff the strategy uses a transformed view.
    std::shared_ptr<const DigestedImage> transformed;
    /// Diffusion-noised image, present iff the strategy uses one.
    std::shared_ptr<const DigestedImage> distorted;
    std::string prompt;
    std::vector<TokenId> generated;
    std::optional<TransformParams> transform_used;

    std::size_t step() const noexcept {
        return generated.size();
    }
};

/// Builds a session for `cfg.strategy`. The transform (if any) is drawn from
/// `rng` first, then the diffusion noise key. `forced_transform` replaces the
/// random draw; RitualPlus requires it (see select_transform).
DecodeSession prepare_session(ImageBuffer image, std::string prompt, const StrategyConfig &cfg, Rng &rng,
                              std::optional<TransformParams> forced_transform = std::nullopt);

struct TopEntry {
    TokenId id;
    double probability;
};

/// Highest-probability entries, ties broken by lower id.
std::vector<TopEntry> top_entries(const TokenDistribution &d, std::size_t k = 8);

struct StreamHead {
    std::string name;  // original, transformed, distorted, text_only
    std::vector<TopEntry> top;
};

struct StepTrace {
    std::size_t t = 0;  // 1 for the first generated token
    std::vector<StreamHead> streams;
    std::vector<TopEntry> fused;
    std::size_t admitted = 0;
    TokenId chosen = 0;
};

struct DecodeResult {
    std::string text;
    /// Sampled ids, including a terminating end-of-sequence id.
    std::vector<TokenId> tokens;
    std::vector<StepTrace> steps;
    std::optional<TransformParams> transform_used;
    bool finished_by_eos = false;
    std::uint64_t provider_calls = 0;
    /// Self-feedback selection sub-session, null when not used.
    nlohmann::json selection;
};

/// Thrown when a provider or transport error interrupts decoding; carries the
/// trace of the completed steps.
class DecodeAborted : public Error {
public:
    DecodeAborted(ErrorCode code, const std::string &message, DecodeResult partial)
        : Error(code, message), partial_(std::move(partial)) {}

    const DecodeResult &partial() const noexcept {
        return partial_;
    }

private:
    DecodeResult partial_;
};

/// Runs the decode loop until end-of-sequence or `cfg.max_new_tokens`.
/// Each step queries one provider stream per conditioning the strategy uses,
/// masks with the original-image distribution (end-of-sequence always
/// admitted), fuses and samples. `rng` is read only by the multinomial sampler.
DecodeResult decode(DecodeSession &session, ProviderHandle &provider, const StrategyConfig &cfg, Rng &rng);

/// Per-step fused distribution for a strategy, given that step's stream
/// distributions (unused ones may be null). Exposed so tests can replay a
/// decode without a provider.
TokenDistribution fuse_step(const StrategyConfig &cfg, std::size_t t, const PlausibilityMask &mask,
                            const TokenDistribution &p_orig, const TokenDistribution *p_trans,
                            const TokenDistribution *p_dist, const TokenDistribution *p_text);

nlohmann::json to_json(const DecodeResult &result, const StrategyConfig &cfg);

} // namespace ritual
