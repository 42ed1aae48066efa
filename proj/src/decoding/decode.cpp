// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/decoding/decode.hpp"

#include "ritual/transforms/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ritual {

namespace {

const TokenDistribution &need(const TokenDistribution *d, const char *stream) {
    if (d == nullptr) {
        throw Error(ErrorCode::InvalidParams, std::string("strategy needs the ") + stream + " stream");
    }
    return *d;
}

nlohmann::json to_json(const std::vector<TopEntry> &entries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &e : entries) {
        arr.push_back({e.id, e.probability});
    }
    return arr;
}

} // namespace

DecodeSession prepare_session(ImageBuffer image, std::string prompt, const StrategyConfig &cfg, Rng &rng,
                              std::optional<TransformParams> forced_transform) {
    cfg.validate();
    DecodeSession session;
    session.prompt = std::move(prompt);
    const ImageSize size = image.size();
    auto original = std::make_shared<const DigestedImage>(std::move(image));
    if (uses_transformed(cfg.strategy)) {
        if (!forced_transform && cfg.strategy == Strategy::RitualPlus) {
            throw Error(ErrorCode::InvalidParams, "ritual_plus needs a selected transform");
        }
        const TransformParams params = forced_transform ? *forced_transform : sample_transform(rng, size);
        session.transformed = std::make_shared<const DigestedImage>(apply_transform(original->pixels, params));
        session.transform_used = params;
    }
    if (uses_distorted(cfg.strategy)) {
        session.distorted =
            std::make_shared<const DigestedImage>(diffusion_distort(original->pixels, cfg.noise_steps, rng));
    }
    session.image = std::move(original);
    return session;
}

std::vector<TopEntry> top_entries(const TokenDistribution &d, std::size_t k) {
    const auto lw = d.log_weights();
    std::vector<TokenId> ids;
    for (std::size_t i = 0; i < lw.size(); ++i) {
        if (std::isfinite(lw[i])) {
            ids.push_back(static_cast<TokenId>(i));
        }
    }
    const std::size_t n = std::min(k, ids.size());
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                      [&](TokenId a, TokenId b) { return lw[a] > lw[b] || (lw[a] == lw[b] && a < b); });
    std::vector<TopEntry> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({ids[i], std::exp(lw[ids[i]])});
    }
    return out;
}

TokenDistribution fuse_step(const StrategyConfig &cfg, std::size_t t, const PlausibilityMask &mask,
                            const TokenDistribution &p_orig, const TokenDistribution *p_trans,
                            const TokenDistribution *p_dist, const TokenDistribution *p_text) {
    switch (cfg.strategy) {
    case Strategy::Base: return mask.apply(p_orig);
    case Strategy::Ritual:
    case Strategy::RitualPlus: return fuse_ritual(p_orig, need(p_trans, "transformed"), cfg.alpha, mask);
    case Strategy::Vcd: return fuse_vcd(p_orig, need(p_dist, "distorted"), cfg.gamma, cfg.delta, mask);
    case Strategy::M3id: return fuse_m3id(p_orig, need(p_text, "text_only"), cfg.lambda, t, mask);
    case Strategy::RitualVcd: {
        const auto d = fuse_vcd(p_orig, need(p_dist, "distorted"), cfg.gamma, cfg.delta, mask);
        return fuse_combined(need(p_trans, "transformed"), d, cfg.zeta, mask);
    }
    case Strategy::RitualM3id: {
        const auto d = fuse_m3id(p_orig, need(p_text, "text_only"), cfg.lambda, t, mask);
        return fuse_combined(need(p_trans, "transformed"), d, cfg.zeta, mask);
    }
    }
    throw Error(ErrorCode::InvalidParams, "unknown strategy");
}

DecodeResult decode(DecodeSession &session, ProviderHandle &provider, const StrategyConfig &cfg, Rng &rng) {
    cfg.validate();
    if (!session.image) {
        throw Error(ErrorCode::InvalidParams, "session has no image");
    }
    if (uses_transformed(cfg.strategy) && !session.transformed) {
        throw Error(ErrorCode::InvalidParams, "session lacks the transformed image");
    }
    if (uses_distorted(cfg.strategy) && !session.distorted) {
        throw Error(ErrorCode::InvalidParams, "session lacks the distorted image");
    }
    const TokenId eos = provider.capabilities().eos_id;
    const std::uint64_t calls_before = provider.distribution_calls();

    DecodeResult result;
    result.transform_used = session.transform_used;
    auto query = [&](const DigestedImage *image) {
        return provider.next_distribution(DistributionRequest{image, session.prompt, session.generated});
    };

    try {
        for (std::size_t t = 1; t <= cfg.max_new_tokens; ++t) {
            StepTrace step;
            step.t = t;
            const TokenDistribution p_orig = query(session.image.get());
            step.streams.push_back({"original", top_entries(p_orig)});
            std::optional<TokenDistribution> p_trans, p_dist, p_text;
            if (uses_transformed(cfg.strategy)) {
                p_trans = query(session.transformed.get());
                step.streams.push_back({"transformed", top_entries(*p_trans)});
            }
            if (uses_distorted(cfg.strategy)) {
                p_dist = query(session.distorted.get());
                step.streams.push_back({"distorted", top_entries(*p_dist)});
            }
            if (uses_text_only(cfg.strategy)) {
                p_text = query(nullptr);
                step.streams.push_back({"text_only", top_entries(*p_text)});
            }
            const PlausibilityMask mask = plausibility_mask(p_orig, cfg.beta, eos);
            const TokenDistribution fused =
                fuse_step(cfg, t, mask, p_orig, p_trans ? &*p_trans : nullptr, p_dist ? &*p_dist : nullptr,
                          p_text ? &*p_text : nullptr);
            step.fused = top_entries(fused);
            step.admitted = mask.admitted_count();
            step.chosen = sample(fused, cfg.sampler, rng);
            session.generated.push_back(step.chosen);
            result.tokens.push_back(step.chosen);
            result.steps.push_back(std::move(step));
            if (result.tokens.back() == eos) {
                result.finished_by_eos = true;
                break;
            }
        }
        std::span<const TokenId> content(result.tokens);
        if (result.finished_by_eos) {
            content = content.first(content.size() - 1);
        }
        result.text = provider.detokenize(content);
    } catch (const Error &e) {
        result.provider_calls = provider.distribution_calls() - calls_before;
        throw DecodeAborted(e.code(), "decode aborted after " + std::to_string(result.steps.size()) +
                                          " step(s): " + e.what(),
                            std::move(result));
    }
    result.provider_calls = provider.distribution_calls() - calls_before;
    return result;
}

nlohmann::json to_json(const DecodeResult &result, const StrategyConfig &cfg) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto &s : result.steps) {
        nlohmann::json streams = nlohmann::json::object();
        for (const auto &h : s.streams) {
            streams[h.name] = to_json(h.top);
        }
        steps.push_back({{"t", s.t},
                         {"streams", std::move(streams)},
                         {"fused", to_json(s.fused)},
                         {"admitted", s.admitted},
                         {"chosen", s.chosen}});
    }
    nlohmann::json j = {
        {"config", to_json(cfg)},
        {"transform", result.transform_used ? to_json(*result.transform_used) : nlohmann::json(nullptr)},
        {"steps", std::move(steps)},
        {"tokens", result.tokens},
        {"text", result.text},
        {"finished_by_eos", result.finished_by_eos},
        {"provider_calls", result.provider_calls},
    };
    if (!result.selection.is_null()) {
        j["selection"] = result.selection;
    }
    return j;
}

} // namespace ritual
