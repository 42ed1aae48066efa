// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ritual {

struct ImageSize {
    int width = 0;
    int height = 0;

    friend bool operator==(const ImageSize &, const ImageSize &) = default;
};

/// Row-major interleaved RGB, 8 bits per channel.
class ImageBuffer {
public:
    static constexpr int kChannels = 3;

    /// Black image.
    ImageBuffer(int width, int height);
    ImageBuffer(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const noexcept {
        return width_;
    }

    int height() const noexcept {
        return height_;
    }

    ImageSize size() const noexcept {
        return {width_, height_};
    }

    std::span<const std::uint8_t> pixels() const noexcept {
        return pixels_;
    }

    std::span<std::uint8_t> pixels() noexcept {
        return pixels_;
    }

    std::uint8_t at(int x, int y, int c) const noexcept {
        return pixels_[offset(x, y, c)];
    }

    std::uint8_t &at(int x, int y, int c) noexcept {
        return pixels_[offset(x, y, c)];
    }

    std::size_t offset(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
    }

    friend bool operator==(const ImageBuffer &, const ImageBuffer &) = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> pixels_;
};

} // namespace ritual
