// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/provider/provider.hpp"

#include <array>
#include <atomic>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ritual {

/// Word table of the mock tokenizer; id i detokenizes to kMockWords[i].
/// Ids past the table (vocab_size > 32) detokenize to "w<id>".
inline constexpr std::array<std::string_view, 32> kMockWords = {
    "</s>",   "the",   "a",       "yes",    "no",     "there",      "is",       "dog",
    "cat",    "car",   "person",  "frisbee", "table", "chair",      "bus",      "in",
    "image",  "on",    "and",     "with",   "of",     "tree",       "horizontal", "vertical",
    "flip",   "rotate", "color",  "jitter", "gaussian", "blur",     "crop",     ".",
};

inline constexpr std::size_t kMockVocabSize = 32;
inline constexpr TokenId kMockEosId = 0;
inline constexpr std::size_t kMockMaxContext = 2048;
inline constexpr double kMockLogitScale = 5.0;

/// Forces a fixed reply for prompts containing `prompt_contains`: at step k
/// the distribution is one-hot on tokens[k], then on eos once exhausted.
struct ScriptedReply {
    std::string prompt_contains;
    std::vector<TokenId> tokens;
};

struct MockOptions {
    std::size_t vocab_size = kMockVocabSize;
    /// Treat every request as if no image were attached.
    bool ignore_image = false;
    std::vector<ScriptedReply> script;
};

/// Parses the option part of a `mock:` endpoint: a comma-separated list of
/// `vocab=<n>`, `ignore_image`, `script=<path to JSON>`. Empty = defaults.
/// The script file is a JSON array of {"prompt_contains": S, "reply": S | [ids]},
/// where a string reply is tokenized against the mock word table.
MockOptions parse_mock_options(std::string_view spec);

Capabilities mock_capabilities(const MockOptions &options = {});

/// The mock's next-token distribution, a pure function of the request.
///
/// For token index i the mock hashes
///
///     SHA-256( C || u64le(len(prompt)) || prompt || u64le(n) || u32le(g_1) .. u32le(g_n) || u32le(i) )
///
/// where C is the 64-character lowercase hex pixel digest of the image, or
/// the 5 ASCII bytes "noimg" for a text-only request, and g are the generated
/// ids. The first 8 digest bytes, read big-endian as u64 and shifted right by
/// 11, times 2^-53, give u_i in [0, 1). The logit is 5 * u_i and the result is
/// log_softmax over the vocabulary. Scripted replies override this.
TokenDistribution mock_distribution(const Capabilities &caps, const DistributionRequest &request,
                                    const MockOptions &options = {});

/// Same construction keyed directly by an image digest (nullopt = text only);
/// used by the wire server, which receives the digest alongside the PNG.
TokenDistribution mock_distribution_for_digest(const Capabilities &caps, std::optional<std::string_view> image_digest,
                                               const std::string &prompt, std::span<const TokenId> generated,
                                               const MockOptions &options = {});

std::string mock_detokenize(std::span<const TokenId> ids);

/// Tokenizes whitespace-separated words against kMockWords. Unknown words throw InvalidParams.
std::vector<TokenId> mock_tokenize(std::string_view text);

/// In-process mock backend. Stateless apart from an atomic call counter;
/// safe to share between threads.
class MockProvider : public Provider {
public:
    explicit MockProvider(MockOptions options = {});

    Capabilities hello(int protocol_version) override;
    TokenDistribution distribution(const DistributionRequest &request) override;
    std::string detokenize(std::span<const TokenId> ids) override;

    std::uint64_t distribution_calls() const noexcept {
        return calls_.load();
    }

    const MockOptions &options() const noexcept {
        return options_;
    }

private:
    MockOptions options_;
    Capabilities caps_;
    std::atomic<std::uint64_t> calls_{0};
};

} // namespace ritual
