// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/decoding/strategy.hpp"

#include "ritual/core/error.hpp"

#include <cctype>
#include <cmath>

namespace ritual {

namespace {

std::string canonical(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '-' || c == '+' || c == ' ') {
            c = '_';
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

} // namespace

std::string_view to_string(Strategy s) noexcept {
    switch (s) {
    case Strategy::Base: return "base";
    case Strategy::Ritual: return "ritual";
    case Strategy::Vcd: return "vcd";
    case Strategy::M3id: return "m3id";
    case Strategy::RitualVcd: return "ritual_vcd";
    case Strategy::RitualM3id: return "ritual_m3id";
    case Strategy::RitualPlus: return "ritual_plus";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
    std::string key = canonical(text);
    if (key == "ritual_") {
        key = "ritual_plus";
    }
    for (Strategy s : kAllStrategies) {
        if (key == to_string(s)) {
            return s;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Sampler s) noexcept {
    return s == Sampler::Greedy ? "greedy" : "multinomial";
}

std::optional<Sampler> parse_sampler(std::string_view text) {
    const std::string key = canonical(text);
    if (key == "greedy") {
        return Sampler::Greedy;
    }
    if (key == "multinomial" || key == "sample") {
        return Sampler::Multinomial;
    }
    return std::nullopt;
}

bool uses_transformed(Strategy s) noexcept {
    return s == Strategy::Ritual || s == Strategy::RitualVcd || s == Strategy::RitualM3id ||
           s == Strategy::RitualPlus;
}

bool uses_distorted(Strategy s) noexcept {
    return s == Strategy::Vcd || s == Strategy::RitualVcd;
}

bool uses_text_only(Strategy s) noexcept {
    return s == Strategy::M3id || s == Strategy::RitualM3id;
}

int streams_per_step(Strategy s) noexcept {
    return 1 + int(uses_transformed(s)) + int(uses_distorted(s)) + int(uses_text_only(s));
}

StrategyConfig StrategyConfig::for_strategy(Strategy s) {
    StrategyConfig cfg;
    cfg.strategy = s;
    if (s == Strategy::RitualVcd) {
        cfg.gamma = 1.0;
        cfg.delta = 0.1;
        cfg.zeta = 3.0;
    } else if (s == Strategy::RitualM3id) {
        cfg.zeta = 3.5;
    }
    return cfg;
}

void StrategyConfig::validate() const {
    auto fail = [](const std::string &what) { throw Error(ErrorCode::InvalidParams, what); };
    auto finite = [&](double v, const char *name) {
        if (!std::isfinite(v)) {
            fail(std::string(name) + " must be finite");
        }
    };
    finite(alpha, "alpha");
    finite(beta, "beta");
    finite(gamma, "gamma");
    finite(delta, "delta");
    finite(lambda, "lambda");
    finite(zeta, "zeta");
    if (alpha < 0) {
        fail("alpha must be >= 0");
    }
    if (beta < 0 || beta > 1) {
        fail("beta must lie in [0, 1]");
    }
    if (lambda <= 0) {
        fail("lambda must be > 0");
    }
    if (zeta < 0) {
        fail("zeta must be >= 0");
    }
    if (noise_steps < 1 || noise_steps > 1000) {
        fail("noise_steps must lie in [1, 1000]");
    }
    if (max_new_tokens == 0) {
        fail("max_new_tokens must be positive");
    }
}

nlohmann::json to_json(const StrategyConfig &cfg) {
    return {
        {"strategy", to_string(cfg.strategy)},
        {"alpha", cfg.alpha},
        {"beta", cfg.beta},
        {"gamma", cfg.gamma},
        {"delta", cfg.delta},
        {"lambda", cfg.lambda},
        {"zeta", cfg.zeta},
        {"noise_steps", cfg.noise_steps},
        {"max_new_tokens", cfg.max_new_tokens},
        {"sampler", to_string(cfg.sampler)},
        {"seed", cfg.seed},
    };
}

StrategyConfig strategy_config_from_json(const nlohmann::json &j) {
    try {
        Strategy s = Strategy::Base;
        if (j.contains("strategy")) {
            const auto parsed = parse_strategy(j["strategy"].get<std::string>());
            if (!parsed) {
                throw Error(ErrorCode::InvalidParams, "unknown strategy " + j["strategy"].dump());
            }
            s = *parsed;
        }
        StrategyConfig cfg = StrategyConfig::for_strategy(s);
        cfg.alpha = j.value("alpha", cfg.alpha);
        cfg.beta = j.value("beta", cfg.beta);
        cfg.gamma = j.value("gamma", cfg.gamma);
        cfg.delta = j.value("delta", cfg.delta);
        cfg.lambda = j.value("lambda", cfg.lambda);
        cfg.zeta = j.value("zeta", cfg.zeta);
        cfg.noise_steps = j.value("noise_steps", cfg.noise_steps);
        cfg.max_new_tokens = j.value("max_new_tokens", cfg.max_new_tokens);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("sampler")) {
            const auto sampler = parse_sampler(j["sampler"].get<std::string>());
            if (!sampler) {
                throw Error(ErrorCode::InvalidParams, "unknown sampler " + j["sampler"].dump());
            }
            cfg.sampler = *sampler;
        }
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, std::string("strategy config: ") + e.what());
    }
}

} // namespace ritual
