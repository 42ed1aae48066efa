// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ritual {

enum class Strategy { Base, Ritual, Vcd, M3id, RitualVcd, RitualM3id, RitualPlus };

inline constexpr std::array<Strategy, 7> kAllStrategies = {
    Strategy::Base,      Strategy::Ritual,     Strategy::Vcd,        Strategy::M3id,
    Strategy::RitualVcd, Strategy::RitualM3id, Strategy::RitualPlus,
};

/// Stable identifiers: base, ritual, vcd, m3id, ritual_vcd, ritual_m3id, ritual_plus.
std::string_view to_string(Strategy s) noexcept;

/// Accepts the identifiers above, case-insensitively, with '-' or '+' in place of '_'
/// ("ritual+vcd", "RITUAL+").
std::optional<Strategy> parse_strategy(std::string_view text);

enum class Sampler { Greedy, Multinomial };

std::string_view to_string(Sampler s) noexcept;
std::optional<Sampler> parse_sampler(std::string_view text);

/// Does the strategy query a transformed copy of the image?
bool uses_transformed(Strategy s) noexcept;
/// Does the strategy query a diffusion-noised copy of the image?
bool uses_distorted(Strategy s) noexcept;
/// Does the strategy query the provider without any image?
bool uses_text_only(Strategy s) noexcept;
/// Provider calls per decode step.
int streams_per_step(Strategy s) noexcept;

inline constexpr std::size_t kCaptionMaxNewTokens = 64;
inline constexpr std::size_t kYesNoMaxNewTokens = 16;

/// All decoding hyperparameters. Member defaults are the plain-strategy
/// values; `for_strategy` applies the combined-strategy overrides
/// (RitualVcd: gamma 1, delta 0.1, zeta 3; RitualM3id: zeta 3.5).
struct StrategyConfig {
    Strategy strategy = Strategy::Base;
    double alpha = 3.0;
    double beta = 0.1;
    double gamma = 2.0;
    double delta = 1.0;
    double lambda = 0.1;
    double zeta = 3.0;
    int noise_steps = 500;
    std::size_t max_new_tokens = kCaptionMaxNewTokens;
    Sampler sampler = Sampler::Greedy;
    std::uint64_t seed = 0;

    static StrategyConfig for_strategy(Strategy s);

    /// Throws ErrorCode::InvalidParams on out-of-range values.
    void validate() const;

    friend bool operator==(const StrategyConfig &, const StrategyConfig &) = default;
};

nlohmann::json to_json(const StrategyConfig &cfg);
/// Missing keys take `for_strategy` defaults of the given strategy.
StrategyConfig strategy_config_from_json(const nlohmann::json &j);

} // namespace ritual
