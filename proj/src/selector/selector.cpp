// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/selector/selector.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ritual {

namespace {

constexpr std::array<std::string_view, 6> kDescriptions = {
    "mirror the picture left to right",
    "mirror the picture top to bottom",
    "turn the picture by a random angle",
    "randomly change brightness, contrast, saturation and hue",
    "soften the picture with a smoothing filter",
    "keep a random region and enlarge it",
};

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string render_selection_prompt(std::string_view question) {
    std::string prompt = "Pick the image transformation that would best help answer the question below.\n";
    prompt += "Question: ";
    prompt += question;
    prompt += "\nTransformations:\n";
    for (std::size_t i = 0; i < kAllTransformKinds.size(); ++i) {
        prompt += "- ";
        prompt += display_name(kAllTransformKinds[i]);
        prompt += ": ";
        prompt += kDescriptions[i];
        prompt += "\n";
    }
    prompt += "Answer with exactly one name.";
    return prompt;
}

std::optional<TransformKind> parse_selection(std::string_view response) {
    const std::string text = lowercase(response);
    std::optional<TransformKind> best;
    std::size_t best_pos = std::string::npos;
    for (TransformKind kind : kAllTransformKinds) {
        for (std::string_view name : {display_name(kind), to_string(kind)}) {
            const std::size_t pos = text.find(name);
            if (pos != std::string::npos && (best_pos == std::string::npos || pos < best_pos)) {
                best_pos = pos;
                best = kind;
            }
        }
    }
    return best;
}

Selection select_transform(const ImageBuffer &image, std::string_view question, ProviderHandle &provider,
                           const StrategyConfig &cfg, Rng &rng) {
    StrategyConfig sub_cfg = StrategyConfig::for_strategy(Strategy::Base);
    sub_cfg.beta = cfg.beta;
    sub_cfg.sampler = cfg.sampler;
    sub_cfg.seed = cfg.seed;
    sub_cfg.max_new_tokens = kSelectionMaxNewTokens;

    DecodeSession sub = prepare_session(image, render_selection_prompt(question), sub_cfg, rng);
    Selection selection;
    selection.sub_session = decode(sub, provider, sub_cfg, rng);
    if (const auto kind = parse_selection(selection.sub_session.text)) {
        selection.params = sample_transform_params(*kind, rng, image.size());
    } else {
        selection.fallback = true;
        selection.params = sample_transform(rng, image.size());
    }
    return selection;
}

nlohmann::json to_json(const Selection &selection, const StrategyConfig &cfg) {
    StrategyConfig sub_cfg = StrategyConfig::for_strategy(Strategy::Base);
    sub_cfg.beta = cfg.beta;
    sub_cfg.sampler = cfg.sampler;
    sub_cfg.seed = cfg.seed;
    sub_cfg.max_new_tokens = kSelectionMaxNewTokens;
    return {
        {"response", selection.sub_session.text},
        {"kind", to_string(selection.params.kind)},
        {"fallback", selection.fallback},
        {"session", to_json(selection.sub_session, sub_cfg)},
    };
}

DecodeResult ritual_plus_decode(ImageBuffer image, std::string prompt, ProviderHandle &provider,
                                const StrategyConfig &cfg, Rng &prep_rng, Rng &sample_rng) {
    if (cfg.strategy != Strategy::RitualPlus) {
        throw Error(ErrorCode::InvalidParams, "ritual_plus_decode needs strategy ritual_plus");
    }
    Selection selection = select_transform(image, prompt, provider, cfg, prep_rng);
    DecodeSession session = prepare_session(std::move(image), std::move(prompt), cfg, prep_rng, selection.params);
    const nlohmann::json selection_json = to_json(selection, cfg);
    try {
        DecodeResult result = decode(session, provider, cfg, sample_rng);
        result.selection = selection_json;
        result.provider_calls += selection.sub_session.provider_calls;
        return result;
    } catch (DecodeAborted &e) {
        DecodeResult partial = e.partial();
        partial.selection = selection_json;
        throw DecodeAborted(e.code(), e.what(), std::move(partial));
    }
}

DecodeResult run_session(ImageBuffer image, std::string prompt, ProviderHandle &provider, const StrategyConfig &cfg) {
    Rng root(cfg.seed);
    Rng prep = root.fork();
    Rng sampling = root.fork();
    if (cfg.strategy == Strategy::RitualPlus) {
        return ritual_plus_decode(std::move(image), std::move(prompt), provider, cfg, prep, sampling);
    }
    DecodeSession session = prepare_session(std::move(image), std::move(prompt), cfg, prep);
    return decode(session, provider, cfg, sampling);
}

} // namespace ritual
