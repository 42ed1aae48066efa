// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Newline-delimited JSON protocol between the engine and a provider process.
//
//   -> {"op":"hello","version":1}
//   <- {"ok":true,"vocab_size":N,"eos_id":E,"max_context":C,"name":S}
//   -> {"op":"dist","id":k,"image_png_b64":S|null,"image_digest":S|null,"prompt":S,"generated":[...]}
//   <- {"ok":true,"id":k,"log_probs":[...]}
//   -> {"op":"detok","id":k,"ids":[...]}
//   <- {"ok":true,"id":k,"text":S}
//   error: {"ok":false,"id":k,"error":S}
//
// Key order is irrelevant. A masked (-inf) log-probability travels as null.
// Servers reject an unsupported hello version with an error response that
// also carries their own "version".

#include "ritual/provider/mock.hpp"
#include "ritual/provider/provider.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <stop_token>
#include <string>
#include <string_view>
#include <utility>

namespace ritual::wire {

nlohmann::json log_probs_to_json(const TokenDistribution &d);
std::vector<double> log_probs_from_json(const nlohmann::json &j);

/// Server side of the protocol around a MockProvider. `handle_line` never
/// throws: malformed input produces an {"ok":false,...} response.
class MockServer {
public:
    explicit MockServer(MockOptions options = {});

    std::string handle_line(std::string_view line);

    MockProvider &provider() noexcept {
        return provider_;
    }

private:
    nlohmann::json handle(const nlohmann::json &request);

    MockProvider provider_;
};

/// Serves newline-delimited requests from `in_fd`, answering on `out_fd`,
/// until end of input.
void serve_stream(MockServer &server, int in_fd, int out_fd);

/// Listening TCP server; one thread per connection.
class TcpServer {
public:
    /// Binds 127.0.0.1:`port` (0 = ephemeral). Throws ErrorCode::Io on bind failure.
    TcpServer(MockServer &server, std::uint16_t port, std::string host = "127.0.0.1");
    ~TcpServer();

    TcpServer(const TcpServer &) = delete;
    TcpServer &operator=(const TcpServer &) = delete;

    std::uint16_t port() const noexcept {
        return port_;
    }

    /// Accepts connections until `stop` is requested.
    void run(std::stop_token stop);

private:
    MockServer &server_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
};

/// A bidirectional line channel to a provider.
class LineTransport {
public:
    virtual ~LineTransport() = default;
    /// Sends one request line (without newline) and returns the response line.
    /// Throws ErrorCode::Transport on I/O failure.
    virtual std::string exchange(const std::string &line) = 0;
};

/// Calls MockServer::handle_line directly; exercises the full wire encoding
/// without any process or socket.
class LoopbackTransport : public LineTransport {
public:
    explicit LoopbackTransport(std::shared_ptr<MockServer> server) : server_(std::move(server)) {}

    std::string exchange(const std::string &line) override {
        return server_->handle_line(line);
    }

private:
    std::shared_ptr<MockServer> server_;
};

/// Spawns `/bin/sh -c command` and talks to it over its stdin/stdout.
std::unique_ptr<LineTransport> spawn_process(const std::string &command);

/// Connects to host:port. Throws ErrorCode::Unreachable on failure.
std::unique_ptr<LineTransport> connect_tcp(const std::string &host, std::uint16_t port);

/// Client side of the protocol.
///
/// PNG encodings of request images are cached by pixel digest (a handful of
/// entries), since a decode session sends the same two or three images on
/// every step.
class RemoteProvider : public Provider {
public:
    explicit RemoteProvider(std::unique_ptr<LineTransport> transport);

    Capabilities hello(int protocol_version) override;
    TokenDistribution distribution(const DistributionRequest &request) override;
    std::string detokenize(std::span<const TokenId> ids) override;

private:
    nlohmann::json call(const nlohmann::json &request, bool expect_id);
    const std::string &encoded_image(const DigestedImage &image);

    std::unique_ptr<LineTransport> transport_;
    std::uint64_t next_id_ = 1;
    std::mutex mutex_;
    std::list<std::pair<std::string, std::string>> png_cache_;
};

} // namespace ritual::wire
