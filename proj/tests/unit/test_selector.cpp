// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "ritual/core/error.hpp"
#include "ritual/selector/selector.hpp"

#include <filesystem>
#include <fstream>
#include <set>

using namespace ritual;
using ritual::test::natural_image;

namespace {

std::size_t count_occurrences(const std::string &haystack, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

/// Writes a mock script answering every selection prompt with `reply`.
std::string selection_script(const std::string &name, const std::string &reply) {
    const auto path = std::filesystem::temp_directory_path() / ("ritual_sel_" + name + ".json");
    std::ofstream out(path);
    out << nlohmann::json::array({{{"prompt_contains", "Answer with exactly one name"}, {"reply", reply}}}).dump();
    return path.string();
}

} // namespace

TEST_CASE("parse_selection") {
    CHECK(parse_selection("Gaussian blur.") == TransformKind::GaussianBlur);
    CHECK(parse_selection("I would rotate the image") == TransformKind::Rotate);
    CHECK_FALSE(parse_selection("none of these").has_value());
    CHECK_FALSE(parse_selection("").has_value());
    CHECK(parse_selection("CROP") == TransformKind::Crop);
    CHECK(parse_selection("color_jitter please") == TransformKind::ColorJitter);
    CHECK(parse_selection("vertical flip, not horizontal flip") == TransformKind::VerticalFlip);
    CHECK(parse_selection("maybe crop or rotate") == TransformKind::Crop);
    CHECK(parse_selection("horizontal flip") == TransformKind::HorizontalFlip);
    CHECK_FALSE(parse_selection("flip").has_value());
}

TEST_CASE("selection prompt names every transform once") {
    const auto prompt = render_selection_prompt("Is there a cat on the sofa?");
    CHECK(prompt.find("Is there a cat on the sofa?") != std::string::npos);
    for (auto kind : kAllTransformKinds) {
        CAPTURE(to_string(kind));
        CHECK(count_occurrences(prompt, display_name(kind)) == 1);
    }
}

TEST_CASE("scripted selection picks the named transform") {
    const auto img = natural_image(64, 48);
    auto handle = connect_provider("mock:script=" + selection_script("crop", "crop"));
    auto cfg = StrategyConfig::for_strategy(Strategy::RitualPlus);
    cfg.max_new_tokens = 4;
    Rng rng(5);
    const auto sel = select_transform(img, "Is there a dog?", handle, cfg, rng);
    CHECK(sel.params.kind == TransformKind::Crop);
    CHECK_FALSE(sel.fallback);
    CHECK(sel.sub_session.text == "crop");
    CHECK(sel.sub_session.tokens.size() == 2);

    const auto r = run_session(img, "Is there a dog?", handle, cfg);
    REQUIRE(r.transform_used.has_value());
    CHECK(r.transform_used->kind == TransformKind::Crop);
    CHECK(r.selection.at("kind") == "crop");
    CHECK(r.selection.at("fallback") == false);
    const auto j = to_json(r, cfg);
    CHECK(j.at("transform").at("kind") == "crop");
    CHECK(r.provider_calls == 2 + 2 * r.steps.size());

    auto blur = connect_provider("mock:script=" + selection_script("blur", "gaussian blur"));
    CHECK(run_session(img, "q", blur, cfg).transform_used->kind == TransformKind::GaussianBlur);
}

TEST_CASE("unusable answers fall back to a reproducible uniform draw") {
    const auto img = natural_image(40, 40);
    auto handle = connect_provider("mock:script=" + selection_script("junk", "the dog is on a table"));
    auto cfg = StrategyConfig::for_strategy(Strategy::RitualPlus);
    cfg.max_new_tokens = 3;
    std::set<TransformKind> seen;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        cfg.seed = seed;
        const auto a = run_session(img, "q", handle, cfg);
        const auto b = run_session(img, "q", handle, cfg);
        CHECK(a.selection.at("fallback") == true);
        CHECK(a.transform_used == b.transform_used);
        CHECK(a.tokens == b.tokens);
        seen.insert(a.transform_used->kind);
    }
    CHECK(seen.size() == kAllTransformKinds.size());
}

TEST_CASE("ritual_plus with a fixed transform is ritual with that transform") {
    const auto img = natural_image(48, 36);
    auto handle = connect_provider("mock:script=" + selection_script("vflip", "vertical flip"));
    auto cfg = StrategyConfig::for_strategy(Strategy::RitualPlus);
    cfg.max_new_tokens = 10;
    cfg.sampler = Sampler::Multinomial;
    cfg.seed = 17;
    const auto plus = run_session(img, "Describe.", handle, cfg);
    REQUIRE(plus.transform_used->kind == TransformKind::VerticalFlip);

    auto rcfg = cfg;
    rcfg.strategy = Strategy::Ritual;
    Rng root(cfg.seed);
    Rng prep = root.fork();
    Rng sampling = root.fork();
    auto session = prepare_session(img, "Describe.", rcfg, prep, plus.transform_used);
    const auto ritual = decode(session, handle, rcfg, sampling);
    CHECK(ritual.tokens == plus.tokens);
    CHECK(ritual.text == plus.text);

    Rng p2(1), s2(2);
    CHECK_THROWS_AS(ritual_plus_decode(img, "x", handle, rcfg, p2, s2), Error);
}
