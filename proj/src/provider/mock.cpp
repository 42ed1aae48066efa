// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/provider/mock.hpp"

#include "ritual/core/error.hpp"
#include "ritual/core/rng.hpp"
#include "ritual/provider/digest.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ritual {

namespace {

void put_le(std::vector<std::uint8_t> &buf, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

const ScriptedReply *find_script(const MockOptions &options, const std::string &prompt) {
    for (const auto &rule : options.script) {
        if (prompt.find(rule.prompt_contains) != std::string::npos) {
            return &rule;
        }
    }
    return nullptr;
}

std::vector<ScriptedReply> load_script(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open mock script " + path);
    }
    std::vector<ScriptedReply> rules;
    try {
        const auto j = nlohmann::json::parse(in);
        for (const auto &entry : j) {
            ScriptedReply rule;
            rule.prompt_contains = entry.at("prompt_contains").get<std::string>();
            const auto &reply = entry.at("reply");
            rule.tokens = reply.is_string() ? mock_tokenize(reply.get<std::string>())
                                            : reply.get<std::vector<TokenId>>();
            rules.push_back(std::move(rule));
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, "mock script " + path + ": " + e.what());
    }
    return rules;
}

} // namespace

MockOptions parse_mock_options(std::string_view spec) {
    MockOptions options;
    std::stringstream ss{std::string(spec)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        if (item == "ignore_image") {
            options.ignore_image = true;
        } else if (item.rfind("vocab=", 0) == 0) {
            try {
                options.vocab_size = std::stoul(item.substr(6));
            } catch (const std::exception &) {
                throw Error(ErrorCode::InvalidParams, "bad mock vocab '" + item + "'");
            }
            if (options.vocab_size < 1) {
                throw Error(ErrorCode::InvalidParams, "mock vocab must be positive");
            }
        } else if (item.rfind("script=", 0) == 0) {
            options.script = load_script(item.substr(7));
        } else {
            throw Error(ErrorCode::InvalidParams, "unknown mock option '" + item + "'");
        }
    }
    return options;
}

Capabilities mock_capabilities(const MockOptions &options) {
    return {options.vocab_size, kMockEosId, kMockMaxContext, "mock"};
}

TokenDistribution mock_distribution(const Capabilities &caps, const DistributionRequest &request,
                                    const MockOptions &options) {
    std::optional<std::string_view> digest;
    if (request.image != nullptr) {
        digest = request.image->digest;
    }
    return mock_distribution_for_digest(caps, digest, request.prompt, request.generated, options);
}

TokenDistribution mock_distribution_for_digest(const Capabilities &caps, std::optional<std::string_view> image_digest,
                                               const std::string &prompt, std::span<const TokenId> generated,
                                               const MockOptions &options) {
    const std::size_t n = caps.vocab_size;
    if (const auto *rule = find_script(options, prompt)) {
        const std::size_t k = generated.size();
        const TokenId target = k < rule->tokens.size() ? rule->tokens[k] : caps.eos_id;
        if (target >= n) {
            throw Error(ErrorCode::InvalidParams, "scripted token outside the mock vocabulary");
        }
        std::vector<double> lw(n, kMaskedLogWeight);
        lw[target] = 0.0;
        return TokenDistribution(std::move(lw));
    }

    std::vector<std::uint8_t> msg;
    const bool with_image = image_digest.has_value() && !options.ignore_image;
    const std::string_view cond = with_image ? *image_digest : std::string_view("noimg");
    msg.insert(msg.end(), cond.begin(), cond.end());
    put_le(msg, prompt.size(), 8);
    msg.insert(msg.end(), prompt.begin(), prompt.end());
    put_le(msg, generated.size(), 8);
    for (TokenId id : generated) {
        put_le(msg, id, 4);
    }
    const std::size_t index_at = msg.size();
    put_le(msg, 0, 4);

    std::vector<double> logits(n);
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (int b = 0; b < 4; ++b) {
            msg[index_at + b] = static_cast<std::uint8_t>(i >> (8 * b));
        }
        const auto d = sha256(msg);
        std::uint64_t prefix = 0;
        for (int b = 0; b < 8; ++b) {
            prefix = (prefix << 8) | d[b];
        }
        logits[i] = kMockLogitScale * Rng::to_unit(prefix);
        hi = std::max(hi, logits[i]);
    }
    double acc = 0.0;
    for (double x : logits) {
        acc += std::exp(x - hi);
    }
    const double lse = hi + std::log(acc);
    for (double &x : logits) {
        x -= lse;
    }
    return TokenDistribution(std::move(logits));
}

std::string mock_detokenize(std::span<const TokenId> ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) {
            out.push_back(' ');
        }
        if (ids[i] < kMockWords.size()) {
            out += kMockWords[ids[i]];
        } else {
            out += "w" + std::to_string(ids[i]);
        }
    }
    return out;
}

std::vector<TokenId> mock_tokenize(std::string_view text) {
    std::vector<TokenId> ids;
    std::stringstream ss{std::string(text)};
    std::string word;
    while (ss >> word) {
        bool found = false;
        for (std::size_t i = 0; i < kMockWords.size(); ++i) {
            if (kMockWords[i] == word) {
                ids.push_back(static_cast<TokenId>(i));
                found = true;
                break;
            }
        }
        if (!found) {
            throw Error(ErrorCode::InvalidParams, "word '" + word + "' is not in the mock vocabulary");
        }
    }
    return ids;
}

MockProvider::MockProvider(MockOptions options) : options_(std::move(options)), caps_(mock_capabilities(options_)) {}

Capabilities MockProvider::hello(int protocol_version) {
    if (protocol_version != kProtocolVersion) {
        throw Error(ErrorCode::VersionMismatch, "mock speaks protocol version " + std::to_string(kProtocolVersion) +
                                                    ", client asked for " + std::to_string(protocol_version));
    }
    return caps_;
}

TokenDistribution MockProvider::distribution(const DistributionRequest &request) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return mock_distribution(caps_, request, options_);
}

std::string MockProvider::detokenize(std::span<const TokenId> ids) {
    return mock_detokenize(ids);
}

} // namespace ritual
