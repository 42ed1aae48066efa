// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Self-feedback transform selection: the provider is asked which of the six
// transforms suits the question, and its answer picks the transform kind.

#include "ritual/decoding/decode.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ritual {

inline constexpr std::size_t kSelectionMaxNewTokens = 8;

/// The selection prompt. Each transform's display name appears exactly once
/// (assuming the question itself names none of them).
std::string render_selection_prompt(std::string_view question);

/// Earliest case-insensitive occurrence of a transform name (display form
/// such as "gaussian blur" or identifier such as "gaussian_blur"); equal
/// positions resolve in TransformKind order. Never throws.
std::optional<TransformKind> parse_selection(std::string_view response);

struct Selection {
    TransformParams params;
    bool fallback = false;  // true when the answer named no transform
    DecodeResult sub_session;
};

/// Runs one Base-strategy sub-decode (at most kSelectionMaxNewTokens tokens,
/// inheriting beta and the sampler from `cfg`) on the original image, then
/// draws the named kind's parameters from `rng`, or a uniformly random
/// transform when the answer is unusable.
Selection select_transform(const ImageBuffer &image, std::string_view question, ProviderHandle &provider,
                           const StrategyConfig &cfg, Rng &rng);

nlohmann::json to_json(const Selection &selection, const StrategyConfig &cfg);

/// RitualPlus: selection followed by a Ritual decode with the selected
/// transform. `prep_rng` feeds selection and session preparation, `sample_rng`
/// the main decode's sampler.
DecodeResult ritual_plus_decode(ImageBuffer image, std::string prompt, ProviderHandle &provider,
                                const StrategyConfig &cfg, Rng &prep_rng, Rng &sample_rng);

/// One complete response for any strategy. Two streams are forked from
/// `Rng(cfg.seed)`: the first prepares the session (selection, transform,
/// noise), the second drives sampling.
DecodeResult run_session(ImageBuffer image, std::string prompt, ProviderHandle &provider, const StrategyConfig &cfg);

} // namespace ritual
