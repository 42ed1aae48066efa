// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

// Per-pixel arithmetic shared by the parallel and reference kernels, so both
// produce the same bits.

#pragma once

#include "ritual/transforms/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace ritual::kernels::detail {

inline std::uint8_t to_u8(double v) noexcept {
    v = std::round(v);
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

inline double clamp01(double v) noexcept {
    return std::clamp(v, 0.0, 1.0);
}

inline double gray(double r, double g, double b) noexcept {
    return 0.2989 * r + 0.587 * g + 0.114 * b;
}

struct RotationFrame {
    double cos_t;
    double sin_t;
    double half_w;
    double half_h;
};

inline RotationFrame rotation_frame(const ImageBuffer &image, double degrees) noexcept {
    const double rad = degrees * (3.14159265358979323846 / 180.0);
    return {std::cos(rad), std::sin(rad), image.width() / 2.0, image.height() / 2.0};
}

/// Bilinear sample at fractional pixel coordinates; neighbours outside the
/// image read as zero.
inline double sample_zero_fill(const ImageBuffer &image, double fx, double fy, int c) noexcept {
    const double x0f = std::floor(fx);
    const double y0f = std::floor(fy);
    const int x0 = static_cast<int>(x0f);
    const int y0 = static_cast<int>(y0f);
    const double ax = fx - x0f;
    const double ay = fy - y0f;
    auto px = [&](int x, int y) -> double {
        if (x < 0 || y < 0 || x >= image.width() || y >= image.height()) {
            return 0.0;
        }
        return image.at(x, y, c);
    };
    const double top = (1.0 - ax) * px(x0, y0) + ax * px(x0 + 1, y0);
    const double bottom = (1.0 - ax) * px(x0, y0 + 1) + ax * px(x0 + 1, y0 + 1);
    return (1.0 - ay) * top + ay * bottom;
}

/// Source position of output pixel (x, y) under a counter-clockwise rotation
/// about the image centre.
inline void rotate_source(const RotationFrame &f, int x, int y, double &fx, double &fy) noexcept {
    const double dx = x + 0.5 - f.half_w;
    const double dy = y + 0.5 - f.half_h;
    const double sx = f.cos_t * dx - f.sin_t * dy;
    const double sy = f.sin_t * dx + f.cos_t * dy;
    fx = sx + f.half_w - 0.5;
    fy = sy + f.half_h - 0.5;
}

struct ResizeTap {
    int i0;
    int i1;
    double lambda;
};

/// Half-pixel-centre bilinear tap for output index `o` when resizing `in` samples to `out`.
inline ResizeTap resize_tap(int o, int in, int out) noexcept {
    const double scale = static_cast<double>(in) / out;
    double src = (o + 0.5) * scale - 0.5;
    if (src < 0.0) {
        src = 0.0;
    }
    int i0 = static_cast<int>(std::floor(src));
    i0 = std::min(i0, in - 1);
    const int i1 = std::min(i0 + 1, in - 1);
    return {i0, i1, src - i0};
}

inline std::array<double, 3> rgb_to_hsv(double r, double g, double b) noexcept {
    const double maxc = std::max({r, g, b});
    const double minc = std::min({r, g, b});
    const bool eqc = maxc == minc;
    const double cr = maxc - minc;
    const double s = cr / (eqc ? 1.0 : maxc);
    const double div = eqc ? 1.0 : cr;
    const double rc = (maxc - r) / div;
    const double gc = (maxc - g) / div;
    const double bc = (maxc - b) / div;
    double h;
    if (maxc == r) {
        h = bc - gc;
    } else if (maxc == g) {
        h = 2.0 + rc - bc;
    } else {
        h = 4.0 + gc - rc;
    }
    h = std::fmod(h / 6.0 + 1.0, 1.0);
    return {h, s, maxc};
}

inline std::array<double, 3> hsv_to_rgb(double h, double s, double v) noexcept {
    const double h6 = h * 6.0;
    const double fl = std::floor(h6);
    const double f = h6 - fl;
    const int i = static_cast<int>(fl) % 6;
    const double p = clamp01(v * (1.0 - s));
    const double q = clamp01(v * (1.0 - s * f));
    const double t = clamp01(v * (1.0 - s * (1.0 - f)));
    switch (i < 0 ? i + 6 : i) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
    }
}

inline void shift_hue(double &r, double &g, double &b, double shift) noexcept {
    auto hsv = rgb_to_hsv(r, g, b);
    double h = std::fmod(hsv[0] + shift, 1.0);
    if (h < 0.0) {
        h += 1.0;
    }
    const auto rgb = hsv_to_rgb(h, hsv[1], hsv[2]);
    r = rgb[0];
    g = rgb[1];
    b = rgb[2];
}

inline double diffuse(std::uint8_t v, double signal_scale, double noise_scale, double eps) noexcept {
    const double x0 = v / 127.5 - 1.0;
    const double xt = signal_scale * x0 + noise_scale * eps;
    return (xt + 1.0) * 127.5;
}

} // namespace ritual::kernels::detail
