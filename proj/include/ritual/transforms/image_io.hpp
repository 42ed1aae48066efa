// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/transforms/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace ritual {

// PNG (libpng) and baseline JPEG (libjpeg) readers. Alpha, palette and
// grayscale inputs are converted to RGB8. All failures throw ErrorCode::Io.

ImageBuffer decode_image(std::span<const std::uint8_t> bytes);
ImageBuffer read_image(const std::filesystem::path &path);

std::vector<std::uint8_t> encode_png(const ImageBuffer &image);
ImageBuffer decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::filesystem::path &path, const ImageBuffer &image);

} // namespace ritual
