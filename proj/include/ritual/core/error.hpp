// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ritual {

enum class ErrorCode {
    AllMasked,
    ShapeMismatch,
    InvalidParams,
    InvalidRequest,
    Unreachable,
    VersionMismatch,
    Transport,
    ProviderFault,
    MalformedCategory,
    Io,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept {
        return code_;
    }

private:
    ErrorCode code_;
};

} // namespace ritual
