// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/core/distribution.hpp"
#include "ritual/transforms/image.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ritual {

inline constexpr int kProtocolVersion = 1;

struct Capabilities {
    std::size_t vocab_size = 0;
    TokenId eos_id = 0;
    std::size_t max_context = 0;
    std::string provider_name;

    friend bool operator==(const Capabilities &, const Capabilities &) = default;
};

/// An image together with its pixel digest, computed once so repeated
/// requests can be keyed (and cached) by digest.
struct DigestedImage {
    explicit DigestedImage(ImageBuffer image);

    ImageBuffer pixels;
    std::string digest;
};

/// Conditioning for one next-token query: (image, prompt, generated prefix).
/// A null `image` asks for the text-only distribution.
struct DistributionRequest {
    const DigestedImage *image = nullptr;
    std::string prompt;
    std::vector<TokenId> generated;
};

/// Backend answering the three protocol operations. Implementations:
/// MockProvider (in-process) and RemoteProvider (wire protocol).
class Provider {
public:
    virtual ~Provider() = default;

    /// Throws ErrorCode::VersionMismatch if `protocol_version` is not spoken.
    virtual Capabilities hello(int protocol_version) = 0;
    virtual TokenDistribution distribution(const DistributionRequest &request) = 0;
    virtual std::string detokenize(std::span<const TokenId> ids) = 0;
};

/// A provider after a successful handshake. Validates requests against the
/// negotiated capabilities before they reach the backend, and checks that
/// every returned distribution is normalized.
///
/// One handle serves one decode session at a time; it is not thread-safe.
class ProviderHandle {
public:
    static ProviderHandle handshake(std::shared_ptr<Provider> backend, int protocol_version = kProtocolVersion);

    const Capabilities &capabilities() const noexcept {
        return caps_;
    }

    TokenDistribution next_distribution(const DistributionRequest &request);
    std::string detokenize(std::span<const TokenId> ids);

    /// next_distribution calls issued through this handle.
    std::uint64_t distribution_calls() const noexcept {
        return calls_;
    }

    Provider &backend() noexcept {
        return *backend_;
    }

private:
    ProviderHandle(std::shared_ptr<Provider> backend, Capabilities caps)
        : backend_(std::move(backend)), caps_(std::move(caps)) {}

    std::shared_ptr<Provider> backend_;
    Capabilities caps_;
    std::uint64_t calls_ = 0;
};

/// Connects to `mock:[options]`, `exec:<command>` or `tcp:<host>:<port>` and
/// performs the handshake. Throws ErrorCode::Unreachable when the endpoint
/// cannot be reached and ErrorCode::InvalidParams for malformed endpoints.
ProviderHandle connect_provider(std::string_view endpoint, int protocol_version = kProtocolVersion);

/// Maximum |sum(p) - 1| accepted from a provider.
inline constexpr double kProviderNormalizationTolerance = 1e-6;

} // namespace ritual
