// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/core/error.hpp"
#include "ritual/provider/wire.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>
#include <vector>

namespace ritual::wire {

namespace {

std::string errno_text(const char *what) {
    return std::string(what) + ": " + std::strerror(errno);
}

void ignore_sigpipe() {
    static const bool once = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)once;
}

// Buffered newline reader over a file descriptor.
class LineReader {
public:
    explicit LineReader(int fd) : fd_(fd) {}

    /// Returns false on clean end of input with no partial line.
    bool read_line(std::string &out) {
        for (;;) {
            const auto nl = buffer_.find('\n', scanned_);
            if (nl != std::string::npos) {
                out.assign(buffer_, 0, nl);
                buffer_.erase(0, nl + 1);
                scanned_ = 0;
                return true;
            }
            scanned_ = buffer_.size();
            char chunk[65536];
            const ssize_t n = ::read(fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) {
                    continue;
                }
                throw Error(ErrorCode::Transport, errno_text("read"));
            }
            if (n == 0) {
                if (buffer_.empty()) {
                    return false;
                }
                out = std::move(buffer_);
                buffer_.clear();
                scanned_ = 0;
                return true;
            }
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

private:
    int fd_;
    std::string buffer_;
    std::size_t scanned_ = 0;
};

void write_all(int fd, std::string_view data, bool socket) {
    while (!data.empty()) {
        const ssize_t n = socket ? ::send(fd, data.data(), data.size(), MSG_NOSIGNAL)
                                 : ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw Error(ErrorCode::Transport, errno_text("write"));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::string exchange_on(int write_fd, LineReader &reader, const std::string &line, bool socket) {
    std::string framed = line;
    framed.push_back('\n');
    write_all(write_fd, framed, socket);
    std::string response;
    if (!reader.read_line(response)) {
        throw Error(ErrorCode::Transport, "provider closed the connection");
    }
    return response;
}

class ProcessTransport : public LineTransport {
public:
    ProcessTransport(pid_t pid, int to_child, int from_child)
        : pid_(pid), to_child_(to_child), from_child_(from_child), reader_(from_child) {}

    ~ProcessTransport() override {
        ::close(to_child_);
        ::close(from_child_);
        int status = 0;
        while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
        }
    }

    std::string exchange(const std::string &line) override {
        return exchange_on(to_child_, reader_, line, false);
    }

private:
    pid_t pid_;
    int to_child_;
    int from_child_;
    LineReader reader_;
};

class SocketTransport : public LineTransport {
public:
    explicit SocketTransport(int fd) : fd_(fd), reader_(fd) {}
    ~SocketTransport() override {
        ::close(fd_);
    }

    std::string exchange(const std::string &line) override {
        return exchange_on(fd_, reader_, line, true);
    }

private:
    int fd_;
    LineReader reader_;
};

void serve_fd(MockServer &server, int in_fd, int out_fd, bool socket) {
    LineReader reader(in_fd);
    std::string line;
    try {
        while (reader.read_line(line)) {
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                continue;
            }
            std::string response = server.handle_line(line);
            response.push_back('\n');
            write_all(out_fd, response, socket);
        }
    } catch (const Error &) {
        // Peer went away; nothing left to answer.
    }
}

} // namespace

void serve_stream(MockServer &server, int in_fd, int out_fd) {
    ignore_sigpipe();
    serve_fd(server, in_fd, out_fd, false);
}

std::unique_ptr<LineTransport> spawn_process(const std::string &command) {
    ignore_sigpipe();
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) {
        throw Error(ErrorCode::Unreachable, errno_text("pipe"));
    }
    if (::pipe(from_child) != 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw Error(ErrorCode::Unreachable, errno_text("pipe"));
    }
    const pid_t pid = ::fork();
    if (pid < 0) {
        for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
            ::close(fd);
        }
        throw Error(ErrorCode::Unreachable, errno_text("fork"));
    }
    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
            ::close(fd);
        }
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
        ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::make_unique<ProcessTransport>(pid, to_child[1], from_child[0]);
}

std::unique_ptr<LineTransport> connect_tcp(const std::string &host, std::uint16_t port) {
    ignore_sigpipe();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo *result = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
        throw Error(ErrorCode::Unreachable, "cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    std::string last_error = "no addresses";
    for (addrinfo *ai = result; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text("socket");
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            break;
        }
        last_error = errno_text("connect");
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) {
        throw Error(ErrorCode::Unreachable, host + ":" + service + ": " + last_error);
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return std::make_unique<SocketTransport>(fd);
}

TcpServer::TcpServer(MockServer &server, std::uint16_t port, std::string host) : server_(server) {
    ignore_sigpipe();
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw Error(ErrorCode::Io, errno_text("socket"));
    }
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw Error(ErrorCode::Io, "invalid IPv4 listen address '" + host + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr *>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 64) != 0) {
        const std::string msg = errno_text("bind");
        ::close(listen_fd_);
        throw Error(ErrorCode::Io, msg);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr *>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
    if (listen_fd_ >= 0) {
        ::close(listen_fd_);
    }
}

void TcpServer::run(std::stop_token stop) {
    std::vector<std::jthread> workers;
    std::vector<int> client_fds;
    std::mutex fds_mutex;
    while (!stop.stop_requested()) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, 100);
        if (rc < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;
        }
        if (rc == 0) {
            continue;
        }
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            continue;
        }
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        {
            std::lock_guard lock(fds_mutex);
            client_fds.push_back(fd);
        }
        workers.emplace_back([this, fd] { serve_fd(server_, fd, fd, true); });
    }
    {
        // Unblock workers still reading from live connections.
        std::lock_guard lock(fds_mutex);
        for (int fd : client_fds) {
            ::shutdown(fd, SHUT_RDWR);
        }
    }
    workers.clear();
    for (int fd : client_fds) {
        ::close(fd);
    }
}

} // namespace ritual::wire
