// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/core/error.hpp"

namespace ritual {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::AllMasked: return "AllMasked";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::Transport: return "Transport";
    case ErrorCode::ProviderFault: return "ProviderFault";
    case ErrorCode::MalformedCategory: return "MalformedCategory";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

} // namespace ritual
