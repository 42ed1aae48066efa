// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/provider/wire.hpp"

#include "ritual/core/error.hpp"
#include "ritual/provider/digest.hpp"
#include "ritual/transforms/image_io.hpp"

#include <cmath>

namespace ritual::wire {

using nlohmann::json;

namespace {

constexpr std::size_t kPngCacheEntries = 4;

json error_response(const json &id, const std::string &message) {
    return {{"ok", false}, {"id", id}, {"error", message}};
}

} // namespace

json log_probs_to_json(const TokenDistribution &d) {
    json arr = json::array();
    for (double x : d.log_weights()) {
        if (std::isfinite(x)) {
            arr.push_back(x);
        } else {
            arr.push_back(nullptr);
        }
    }
    return arr;
}

std::vector<double> log_probs_from_json(const json &j) {
    if (!j.is_array()) {
        throw Error(ErrorCode::ProviderFault, "log_probs is not an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto &v : j) {
        if (v.is_null()) {
            out.push_back(kMaskedLogWeight);
        } else if (v.is_number()) {
            out.push_back(v.get<double>());
        } else {
            throw Error(ErrorCode::ProviderFault, "log_probs entry is neither a number nor null");
        }
    }
    return out;
}

MockServer::MockServer(MockOptions options) : provider_(std::move(options)) {}

std::string MockServer::handle_line(std::string_view line) {
    json request;
    try {
        request = json::parse(line);
    } catch (const json::exception &e) {
        return error_response(nullptr, std::string("malformed request: ") + e.what()).dump();
    }
    if (!request.is_object()) {
        return error_response(nullptr, "request must be a JSON object").dump();
    }
    const json id = request.contains("id") ? request["id"] : json(nullptr);
    try {
        return handle(request).dump();
    } catch (const Error &e) {
        return error_response(id, e.what()).dump();
    } catch (const json::exception &e) {
        return error_response(id, std::string("bad request: ") + e.what()).dump();
    } catch (const std::exception &e) {
        return error_response(id, e.what()).dump();
    }
}

json MockServer::handle(const json &request) {
    const std::string op = request.at("op").get<std::string>();
    const json id = request.contains("id") ? request["id"] : json(nullptr);
    if (op == "hello") {
        const int version = request.at("version").get<int>();
        if (version != kProtocolVersion) {
            json r = error_response(id, "unsupported protocol version " + std::to_string(version));
            r["version"] = kProtocolVersion;
            return r;
        }
        const auto caps = provider_.hello(version);
        return {{"ok", true},
                {"vocab_size", caps.vocab_size},
                {"eos_id", caps.eos_id},
                {"max_context", caps.max_context},
                {"name", caps.provider_name}};
    }
    if (op == "dist") {
        const auto caps = mock_capabilities(provider_.options());
        std::optional<std::string> digest;
        const json &png = request.contains("image_png_b64") ? request["image_png_b64"] : json(nullptr);
        const json &dig = request.contains("image_digest") ? request["image_digest"] : json(nullptr);
        if (!dig.is_null()) {
            digest = dig.get<std::string>();
        } else if (!png.is_null()) {
            const auto bytes = base64_decode(png.get<std::string>());
            digest = pixel_digest(decode_png(bytes));
        }
        const auto prompt = request.at("prompt").get<std::string>();
        const auto generated = request.at("generated").get<std::vector<TokenId>>();
        for (TokenId t : generated) {
            if (t >= caps.vocab_size) {
                throw Error(ErrorCode::InvalidRequest, "generated id " + std::to_string(t) + " >= vocab_size");
            }
        }
        std::optional<std::string_view> digest_view;
        if (digest) {
            digest_view = *digest;
        }
        const auto d = mock_distribution_for_digest(caps, digest_view, prompt, generated, provider_.options());
        return {{"ok", true}, {"id", id}, {"log_probs", log_probs_to_json(d)}};
    }
    if (op == "detok") {
        const auto ids = request.at("ids").get<std::vector<TokenId>>();
        return {{"ok", true}, {"id", id}, {"text", provider_.detokenize(ids)}};
    }
    return error_response(id, "unknown op '" + op + "'");
}

RemoteProvider::RemoteProvider(std::unique_ptr<LineTransport> transport) : transport_(std::move(transport)) {}

json RemoteProvider::call(const json &request, bool expect_id) {
    const std::string line = transport_->exchange(request.dump());
    json response;
    try {
        response = json::parse(line);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ProviderFault, std::string("unparseable provider response: ") + e.what());
    }
    if (!response.is_object() || !response.contains("ok") || !response["ok"].is_boolean()) {
        throw Error(ErrorCode::ProviderFault, "provider response lacks a boolean 'ok'");
    }
    if (expect_id && response.contains("id") && !response["id"].is_null() && response["id"] != request["id"]) {
        throw Error(ErrorCode::ProviderFault, "response id " + response["id"].dump() + " does not match request id " +
                                                  request["id"].dump());
    }
    return response;
}

Capabilities RemoteProvider::hello(int protocol_version) {
    std::lock_guard lock(mutex_);
    json response;
    try {
        response = call({{"op", "hello"}, {"version", protocol_version}}, false);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::Transport) {
            throw Error(ErrorCode::Unreachable, e.what());
        }
        throw;
    }
    const bool ok = response["ok"].get<bool>();
    if (response.contains("version") && response["version"].is_number_integer() &&
        response["version"].get<int>() != protocol_version) {
        throw Error(ErrorCode::VersionMismatch, "provider speaks protocol version " + response["version"].dump() +
                                                    ", client speaks " + std::to_string(protocol_version));
    }
    if (!ok) {
        throw Error(ErrorCode::ProviderFault, response.value("error", std::string("hello rejected")));
    }
    try {
        Capabilities caps;
        caps.vocab_size = response.at("vocab_size").get<std::size_t>();
        caps.eos_id = response.at("eos_id").get<TokenId>();
        caps.max_context = response.at("max_context").get<std::size_t>();
        caps.provider_name = response.at("name").get<std::string>();
        return caps;
    } catch (const json::exception &e) {
        throw Error(ErrorCode::ProviderFault, std::string("malformed hello response: ") + e.what());
    }
}

const std::string &RemoteProvider::encoded_image(const DigestedImage &image) {
    for (auto it = png_cache_.begin(); it != png_cache_.end(); ++it) {
        if (it->first == image.digest) {
            png_cache_.splice(png_cache_.begin(), png_cache_, it);
            return png_cache_.front().second;
        }
    }
    png_cache_.emplace_front(image.digest, base64_encode(encode_png(image.pixels)));
    if (png_cache_.size() > kPngCacheEntries) {
        png_cache_.pop_back();
    }
    return png_cache_.front().second;
}

TokenDistribution RemoteProvider::distribution(const DistributionRequest &request) {
    std::lock_guard lock(mutex_);
    json j = {{"op", "dist"}, {"id", next_id_++}, {"prompt", request.prompt}, {"generated", request.generated}};
    if (request.image != nullptr) {
        j["image_png_b64"] = encoded_image(*request.image);
        j["image_digest"] = request.image->digest;
    } else {
        j["image_png_b64"] = nullptr;
        j["image_digest"] = nullptr;
    }
    const json response = call(j, true);
    if (!response["ok"].get<bool>()) {
        throw Error(ErrorCode::ProviderFault, response.value("error", std::string("dist failed")));
    }
    if (!response.contains("log_probs")) {
        throw Error(ErrorCode::ProviderFault, "dist response lacks log_probs");
    }
    try {
        return TokenDistribution(log_probs_from_json(response["log_probs"]));
    } catch (const Error &e) {
        throw Error(ErrorCode::ProviderFault, e.what());
    }
}

std::string RemoteProvider::detokenize(std::span<const TokenId> ids) {
    std::lock_guard lock(mutex_);
    const json response =
        call({{"op", "detok"}, {"id", next_id_++}, {"ids", std::vector<TokenId>(ids.begin(), ids.end())}}, true);
    if (!response["ok"].get<bool>()) {
        throw Error(ErrorCode::ProviderFault, response.value("error", std::string("detok failed")));
    }
    if (!response.contains("text") || !response["text"].is_string()) {
        throw Error(ErrorCode::ProviderFault, "detok response lacks text");
    }
    return response["text"].get<std::string>();
}

} // namespace ritual::wire
