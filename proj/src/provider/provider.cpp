// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/provider/provider.hpp"

#include "ritual/core/error.hpp"
#include "ritual/provider/digest.hpp"
#include "ritual/provider/mock.hpp"
#include "ritual/provider/wire.hpp"

#include <cmath>
#include <string>

namespace ritual {

DigestedImage::DigestedImage(ImageBuffer image) : pixels(std::move(image)), digest(pixel_digest(pixels)) {}

ProviderHandle ProviderHandle::handshake(std::shared_ptr<Provider> backend, int protocol_version) {
    if (!backend) {
        throw Error(ErrorCode::Unreachable, "no provider backend");
    }
    Capabilities caps = backend->hello(protocol_version);
    if (caps.vocab_size == 0 || caps.eos_id >= caps.vocab_size || caps.max_context == 0) {
        throw Error(ErrorCode::ProviderFault, "provider reported inconsistent capabilities");
    }
    return ProviderHandle(std::move(backend), std::move(caps));
}

TokenDistribution ProviderHandle::next_distribution(const DistributionRequest &request) {
    if (request.generated.size() >= caps_.max_context) {
        throw Error(ErrorCode::InvalidRequest, "generated prefix reaches max_context");
    }
    for (TokenId id : request.generated) {
        if (id >= caps_.vocab_size) {
            throw Error(ErrorCode::InvalidRequest,
                        "token id " + std::to_string(id) + " >= vocab_size " + std::to_string(caps_.vocab_size));
        }
    }
    ++calls_;
    TokenDistribution d = backend_->distribution(request);
    if (d.vocab_size() != caps_.vocab_size) {
        throw Error(ErrorCode::ProviderFault, "distribution length " + std::to_string(d.vocab_size()) +
                                                  " != vocab_size " + std::to_string(caps_.vocab_size));
    }
    double total = 0.0;
    for (double x : d.log_weights()) {
        total += std::exp(x);
    }
    if (!(std::abs(total - 1.0) <= kProviderNormalizationTolerance)) {
        throw Error(ErrorCode::ProviderFault, "provider distribution is not normalized (sum " +
                                                  std::to_string(total) + ")");
    }
    return d;
}

std::string ProviderHandle::detokenize(std::span<const TokenId> ids) {
    for (TokenId id : ids) {
        if (id >= caps_.vocab_size) {
            throw Error(ErrorCode::InvalidRequest, "token id " + std::to_string(id) + " >= vocab_size");
        }
    }
    return backend_->detokenize(ids);
}

ProviderHandle connect_provider(std::string_view endpoint, int protocol_version) {
    const auto colon = endpoint.find(':');
    if (colon == std::string_view::npos) {
        throw Error(ErrorCode::InvalidParams,
                    "provider endpoint must be mock:, exec:<command> or tcp:<host>:<port>, got '" +
                        std::string(endpoint) + "'");
    }
    const std::string_view scheme = endpoint.substr(0, colon);
    const std::string rest(endpoint.substr(colon + 1));
    if (scheme == "mock") {
        return ProviderHandle::handshake(std::make_shared<MockProvider>(parse_mock_options(rest)), protocol_version);
    }
    if (scheme == "exec") {
        if (rest.empty()) {
            throw Error(ErrorCode::InvalidParams, "exec: endpoint needs a command");
        }
        return ProviderHandle::handshake(std::make_shared<wire::RemoteProvider>(wire::spawn_process(rest)),
                                         protocol_version);
    }
    if (scheme == "tcp") {
        const auto sep = rest.rfind(':');
        if (sep == std::string::npos || sep + 1 == rest.size()) {
            throw Error(ErrorCode::InvalidParams, "tcp endpoint must be tcp:<host>:<port>");
        }
        int port = 0;
        try {
            port = std::stoi(rest.substr(sep + 1));
        } catch (const std::exception &) {
            throw Error(ErrorCode::InvalidParams, "bad tcp port in '" + rest + "'");
        }
        if (port <= 0 || port > 65535) {
            throw Error(ErrorCode::InvalidParams, "tcp port out of range");
        }
        return ProviderHandle::handshake(
            std::make_shared<wire::RemoteProvider>(wire::connect_tcp(rest.substr(0, sep), static_cast<std::uint16_t>(port))),
            protocol_version);
    }
    throw Error(ErrorCode::InvalidParams, "unknown provider scheme '" + std::string(scheme) + "'");
}

} // namespace ritual
