// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/transforms/image.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ritual {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::span<const std::uint8_t> bytes);
std::string to_hex(std::span<const std::uint8_t> bytes);

/// Lowercase hex SHA-256 of u32le(width) || u32le(height) || RGB pixel bytes.
std::string pixel_digest(const ImageBuffer &image);

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ErrorCode::Parse on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

} // namespace ritual
