// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include "ritual/core/error.hpp"
#include "ritual/provider/digest.hpp"
#include "ritual/provider/mock.hpp"
#include "ritual/provider/provider.hpp"
#include "ritual/provider/wire.hpp"
#include "ritual/transforms/image_io.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

using namespace ritual;
using nlohmann::json;
using ritual::test::pattern_image;
using ritual::test::read_json;

namespace {

constexpr double kExactTolerance = 1e-12;

std::vector<json> golden_lines() {
    std::ifstream in(ritual::test::test_dir() / "fixtures" / "protocol_golden.jsonl");
    REQUIRE(in);
    std::vector<json> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(json::parse(line));
        }
    }
    return out;
}

// Compares a live response against its golden counterpart: "*" accepts any
// error text, numbers compare within kExactTolerance, null matches null.
bool matches_golden(const json &actual, const json &expected, std::string &why) {
    if (expected.is_string() && expected.get<std::string>() == "*") {
        if (!actual.is_string() || actual.get<std::string>().empty()) {
            why = "expected non-empty error text";
            return false;
        }
        return true;
    }
    if (expected.is_number() && actual.is_number() && !expected.is_number_integer()) {
        if (std::abs(actual.get<double>() - expected.get<double>()) > kExactTolerance) {
            why = "number " + actual.dump() + " != " + expected.dump();
            return false;
        }
        return true;
    }
    if (expected.is_object()) {
        if (!actual.is_object() || actual.size() != expected.size()) {
            why = "object shape " + actual.dump() + " vs " + expected.dump();
            return false;
        }
        for (const auto &[k, v] : expected.items()) {
            if (!actual.contains(k) || !matches_golden(actual.at(k), v, why)) {
                why = k + ": " + why;
                return false;
            }
        }
        return true;
    }
    if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) {
            why = "array length";
            return false;
        }
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (!matches_golden(actual[i], expected[i], why)) {
                return false;
            }
        }
        return true;
    }
    if (actual != expected) {
        why = actual.dump() + " != " + expected.dump();
        return false;
    }
    return true;
}

std::string request_text(const json &entry) {
    return entry.contains("raw_request") ? entry.at("raw_request").get<std::string>() : entry.at("request").dump();
}

void check_golden_over(wire::LineTransport &transport) {
    for (const auto &entry : golden_lines()) {
        CAPTURE(entry.at("name").get<std::string>());
        const auto reply = json::parse(transport.exchange(request_text(entry)));
        std::string why;
        CHECK_MESSAGE(matches_golden(reply, entry.at("response"), why), why);
    }
}

std::string cli_path() {
    return RITUAL_CLI_PATH;
}

struct TcpFixture {
    std::shared_ptr<wire::MockServer> server = std::make_shared<wire::MockServer>();
    wire::TcpServer tcp{*server, 0};
    std::jthread runner{[this](std::stop_token st) { tcp.run(st); }};
};

} // namespace

TEST_CASE("mock distributions match the independent oracle") {
    const auto cases = read_json(ritual::test::test_dir() / "fixtures" / "mock_oracle.json");
    REQUIRE(cases.size() == 8);
    for (const auto &c : cases) {
        CAPTURE(c.at("name").get<std::string>());
        MockOptions opts;
        opts.vocab_size = c.at("vocab_size").get<std::size_t>();
        opts.ignore_image = c.at("ignore_image").get<bool>();
        MockProvider mock(opts);
        const auto caps = mock.hello(kProtocolVersion);

        std::unique_ptr<DigestedImage> image;
        if (!c.at("image").is_null()) {
            image = std::make_unique<DigestedImage>(
                pattern_image(c["image"]["width"].get<int>(), c["image"]["height"].get<int>()));
            CHECK(image->digest == c.at("digest").get<std::string>());
        }
        DistributionRequest req{image.get(), c.at("prompt").get<std::string>(),
                                c.at("generated").get<std::vector<TokenId>>()};
        const auto d = mock.distribution(req);
        const auto expected = c.at("log_probs").get<std::vector<double>>();
        REQUIRE(d.vocab_size() == expected.size());
        REQUIRE(caps.vocab_size == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(std::abs(d.log_weights()[i] - expected[i]) <= kExactTolerance);
        }
    }
}

TEST_CASE("mock capabilities, tokenizer and options") {
    MockProvider mock;
    const auto caps = mock.hello(1);
    CHECK(caps.vocab_size == 32);
    CHECK(caps.eos_id == 0);
    CHECK(caps.max_context == 2048);
    CHECK(caps.provider_name == "mock");
    const std::vector<TokenId> ids = {3, 7, 31};
    CHECK(mock.detokenize(ids) == "yes dog .");
    CHECK(mock_tokenize("there is a cat") == std::vector<TokenId>{5, 6, 2, 8});
    CHECK_THROWS_AS(mock_tokenize("giraffe"), Error);
    CHECK_THROWS_AS(mock.hello(2), Error);

    CHECK(parse_mock_options("vocab=5,ignore_image").vocab_size == 5);
    CHECK(parse_mock_options("vocab=5,ignore_image").ignore_image);
    CHECK_THROWS_AS(parse_mock_options("vocab=0"), Error);
    CHECK_THROWS_AS(parse_mock_options("turbo"), Error);
}

TEST_CASE("scripted mock replies") {
    const auto path = std::filesystem::temp_directory_path() / "ritual_test_script.json";
    {
        std::ofstream out(path);
        out << R"([{"prompt_contains": "dog", "reply": "yes there is"}])";
    }
    auto handle = connect_provider("mock:script=" + path.string());
    DistributionRequest req{nullptr, "Is there a dog?", {}};
    CHECK(argmax(handle.next_distribution(req)) == 3);
    req.generated = {3, 5, 6};
    const auto eos = handle.next_distribution(req);
    CHECK(eos.probability(0) == 1.0);
    CHECK(eos.is_masked(4));
    req.prompt = "Is there a cat?";
    CHECK(handle.next_distribution(req).has_finite_entry());
    CHECK_FALSE(handle.next_distribution(req).is_masked(4));
    std::filesystem::remove(path);
}

TEST_CASE("handle validates requests before they reach the backend") {
    auto backend = std::make_shared<MockProvider>();
    auto handle = ProviderHandle::handshake(backend);
    DistributionRequest req{nullptr, "x", {32}};
    try {
        handle.next_distribution(req);
        FAIL("expected InvalidRequest");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::InvalidRequest);
    }
    CHECK(backend->distribution_calls() == 0);
    CHECK(handle.distribution_calls() == 0);
    req.generated = {31};
    handle.next_distribution(req);
    CHECK(backend->distribution_calls() == 1);

    req.generated.assign(kMockMaxContext, 1);
    CHECK_THROWS_AS(handle.next_distribution(req), Error);
    const std::vector<TokenId> bad = {40};
    CHECK_THROWS_AS(handle.detokenize(bad), Error);
}

TEST_CASE("version mismatch and handshake idempotence") {
    auto backend = std::make_shared<MockProvider>();
    const auto a = ProviderHandle::handshake(backend).capabilities();
    const auto b = ProviderHandle::handshake(backend).capabilities();
    CHECK(a == b);
    try {
        ProviderHandle::handshake(backend, 7);
        FAIL("expected VersionMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::VersionMismatch);
    }

    auto remote = std::make_shared<wire::RemoteProvider>(
        std::make_unique<wire::LoopbackTransport>(std::make_shared<wire::MockServer>()));
    CHECK(ProviderHandle::handshake(remote).capabilities() == a);
    CHECK(ProviderHandle::handshake(remote).capabilities() == a);
    try {
        ProviderHandle::handshake(remote, 0);
        FAIL("expected VersionMismatch");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::VersionMismatch);
    }
    try {
        connect_provider("nope:");
        FAIL("expected InvalidParams");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::InvalidParams);
    }
}

TEST_CASE("log-prob wire encoding") {
    const TokenDistribution d({std::log(0.25), kMaskedLogWeight, std::log(0.75)});
    const auto j = wire::log_probs_to_json(d);
    CHECK(j[1].is_null());
    const auto back = wire::log_probs_from_json(j);
    CHECK(TokenDistribution(back) == d);
    CHECK_THROWS(wire::log_probs_from_json(json::array({1.0, "x"})));
}

TEST_CASE("protocol golden: in-process server") {
    wire::LoopbackTransport loop(std::make_shared<wire::MockServer>());
    check_golden_over(loop);
}

TEST_CASE("protocol golden: tcp server") {
    TcpFixture fx;
    auto transport = wire::connect_tcp("127.0.0.1", fx.tcp.port());
    check_golden_over(*transport);
}

TEST_CASE("protocol golden: stdio server process") {
    auto transport = wire::spawn_process(cli_path() + " mock-serve --stdio");
    check_golden_over(*transport);
}

TEST_CASE("malformed input keeps the connection usable") {
    TcpFixture fx;
    auto transport = wire::connect_tcp("127.0.0.1", fx.tcp.port());
    for (const char *junk : {"{not json", "[]", "42", R"({"op":"dist","id":1})", R"({"op":"dist","id":"x"})"}) {
        const auto reply = json::parse(transport->exchange(junk));
        CHECK(reply.at("ok") == false);
        CHECK(reply.at("error").is_string());
    }
    const auto hello = json::parse(transport->exchange(R"({"op":"hello","version":1})"));
    CHECK(hello.at("ok") == true);
}

TEST_CASE("remote provider matches the in-process mock on every transport") {
    TcpFixture fx;
    const DigestedImage image(pattern_image(9, 7));
    MockProvider local;
    local.hello(1);

    std::vector<std::pair<std::string, std::string>> endpoints = {
        {"mock", "mock:"},
        {"exec", "exec:" + cli_path() + " mock-serve --stdio"},
        {"tcp", "tcp:127.0.0.1:" + std::to_string(fx.tcp.port())},
    };
    for (const auto &[name, endpoint] : endpoints) {
        CAPTURE(name);
        auto handle = connect_provider(endpoint);
        CHECK(handle.capabilities() == local.hello(1));
        for (const auto *img : {&image, static_cast<const DigestedImage *>(nullptr)}) {
            for (const std::vector<TokenId> &gen : {std::vector<TokenId>{}, std::vector<TokenId>{3, 0, 31}}) {
                DistributionRequest req{img, "Is there a dog?", gen};
                const auto got = handle.next_distribution(req);
                const auto want = local.distribution(req);
                for (std::size_t i = 0; i < want.vocab_size(); ++i) {
                    CHECK(std::abs(got.log_weights()[i] - want.log_weights()[i]) <= kExactTolerance);
                }
            }
        }
        const std::vector<TokenId> ids = {3, 7};
        CHECK(handle.detokenize(ids) == "yes dog");
    }
}

TEST_CASE("unreachable endpoints") {
    try {
        connect_provider("tcp:127.0.0.1:1");
        FAIL("expected Unreachable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::Unreachable);
    }
    try {
        connect_provider("exec:/nonexistent/provider-binary");
        FAIL("expected Unreachable");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::Unreachable);
    }
}

TEST_CASE("concurrent clients see no cross-talk") {
    TcpFixture fx;
    constexpr int kClients = 4;
    std::vector<int> mismatches(kClients, 0);
    {
        std::vector<std::jthread> threads;
        for (int c = 0; c < kClients; ++c) {
            threads.emplace_back([&, c] {
                auto handle = connect_provider("tcp:127.0.0.1:" + std::to_string(fx.tcp.port()));
                MockProvider local;
                const DigestedImage image(pattern_image(5 + c, 4));
                for (TokenId k = 0; k < 25; ++k) {
                    DistributionRequest req{&image, "client " + std::to_string(c), {k}};
                    if (handle.next_distribution(req) != local.distribution(req)) {
                        ++mismatches[c];
                    }
                }
            });
        }
    }
    for (int m : mismatches) {
        CHECK(m == 0);
    }
}

TEST_CASE("digest helpers") {
    const std::string abc = "abc";
    const std::vector<std::uint8_t> bytes(abc.begin(), abc.end());
    CHECK(to_hex(sha256(bytes)) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(base64_encode(bytes) == "YWJj");
    CHECK(base64_decode("YWJj") == bytes);
    const auto img = pattern_image(4, 3);
    CHECK(pixel_digest(img) == "c4799666ffb4c59045d1ff230ea4f18273eee4e3cd6b22d70907a559896ca30c");
}
