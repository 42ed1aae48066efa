// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/transforms/image.hpp"

#include "ritual/core/error.hpp"

#include <string>

namespace ritual {

namespace {

std::size_t checked_size(int width, int height) {
    if (width < 1 || height < 1) {
        throw Error(ErrorCode::InvalidParams,
                    "image dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * ImageBuffer::kChannels;
}

} // namespace

ImageBuffer::ImageBuffer(int width, int height)
    : width_(width), height_(height), pixels_(checked_size(width, height), 0) {}

ImageBuffer::ImageBuffer(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_size(width, height)) {
        throw Error(ErrorCode::InvalidParams, "pixel buffer length does not match width * height * 3");
    }
}

} // namespace ritual
