// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/transforms/kernels.hpp"

#include "pixel_ops.hpp"

#include "ritual/core/rng.hpp"

#include <cstddef>

namespace ritual::kernels {

using detail::to_u8;

ImageBuffer flip_horizontal(const ImageBuffer &image) {
    const int w = image.width();
    const int h = image.height();
    ImageBuffer out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const std::uint8_t *src = image.pixels().data() + image.offset(0, y, 0);
        std::uint8_t *dst = out.pixels().data() + out.offset(0, y, 0);
        for (int x = 0; x < w; ++x) {
            const int sx = w - 1 - x;
            dst[3 * x + 0] = src[3 * sx + 0];
            dst[3 * x + 1] = src[3 * sx + 1];
            dst[3 * x + 2] = src[3 * sx + 2];
        }
    }
    return out;
}

ImageBuffer flip_vertical(const ImageBuffer &image) {
    const int w = image.width();
    const int h = image.height();
    const std::size_t row = static_cast<std::size_t>(w) * 3;
    ImageBuffer out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const std::uint8_t *src = image.pixels().data() + image.offset(0, h - 1 - y, 0);
        std::uint8_t *dst = out.pixels().data() + out.offset(0, y, 0);
        std::copy(src, src + row, dst);
    }
    return out;
}

ImageBuffer rotate_bilinear(const ImageBuffer &image, double degrees) {
    const int w = image.width();
    const int h = image.height();
    const auto frame = detail::rotation_frame(image, degrees);
    ImageBuffer out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double fx;
            double fy;
            detail::rotate_source(frame, x, y, fx, fy);
            // Entirely outside the source: stays black.
            if (fx <= -1.0 || fy <= -1.0 || fx >= w || fy >= h) {
                continue;
            }
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = to_u8(detail::sample_zero_fill(image, fx, fy, c));
            }
        }
    }
    return out;
}

ImageBuffer color_jitter(const ImageBuffer &image, const ColorJitterParams &params) {
    const int w = image.width();
    const int h = image.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<double> px(n * 3);
    const auto src = image.pixels();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n * 3); ++i) {
        px[i] = src[i] / 255.0;
    }

    std::vector<double> row_sums(static_cast<std::size_t>(h));
    for (std::uint8_t op : params.order) {
        switch (op) {
        case 0: {
            const double f = params.brightness;
            if (f == 1.0) {
                break;
            }
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n * 3); ++i) {
                px[i] = detail::clamp01(f * px[i]);
            }
            break;
        }
        case 1: {
            const double f = params.contrast;
            if (f == 1.0) {
                break;
            }
#pragma omp parallel for schedule(static)
            for (int y = 0; y < h; ++y) {
                double s = 0.0;
                const double *p = px.data() + static_cast<std::size_t>(y) * w * 3;
                for (int x = 0; x < w; ++x) {
                    s += detail::gray(p[3 * x], p[3 * x + 1], p[3 * x + 2]);
                }
                row_sums[y] = s;
            }
            double total = 0.0;
            for (double s : row_sums) {
                total += s;
            }
            const double mean = total / static_cast<double>(n);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n * 3); ++i) {
                px[i] = detail::clamp01(f * px[i] + (1.0 - f) * mean);
            }
            break;
        }
        case 2: {
            const double f = params.saturation;
            if (f == 1.0) {
                break;
            }
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
                double *p = px.data() + 3 * i;
                const double g = detail::gray(p[0], p[1], p[2]);
                for (int c = 0; c < 3; ++c) {
                    p[c] = detail::clamp01(f * p[c] + (1.0 - f) * g);
                }
            }
            break;
        }
        case 3: {
            const double shift = params.hue;
            if (shift == 0.0) {
                break;
            }
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
                double *p = px.data() + 3 * i;
                detail::shift_hue(p[0], p[1], p[2], shift);
            }
            break;
        }
        default: break;
        }
    }

    ImageBuffer out(w, h);
    auto dst = out.pixels();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n * 3); ++i) {
        dst[i] = to_u8(px[i] * 255.0);
    }
    return out;
}

ImageBuffer gaussian_blur(const ImageBuffer &image, int kernel_size, double sigma) {
    const auto k = gaussian_kernel_1d(kernel_size, sigma);
    const int half = kernel_size / 2;
    const int w = image.width();
    const int h = image.height();

    std::vector<double> horiz(static_cast<std::size_t>(w) * h * 3);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int t = 0; t < kernel_size; ++t) {
                const int sx = reflect_index(x + t - half, w);
                for (int c = 0; c < 3; ++c) {
                    acc[c] += k[t] * image.at(sx, y, c);
                }
            }
            for (int c = 0; c < 3; ++c) {
                horiz[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc[c];
            }
        }
    }

    ImageBuffer out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int t = 0; t < kernel_size; ++t) {
                const int sy = reflect_index(y + t - half, h);
                const double *p = horiz.data() + (static_cast<std::size_t>(sy) * w + x) * 3;
                for (int c = 0; c < 3; ++c) {
                    acc[c] += k[t] * p[c];
                }
            }
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = to_u8(acc[c]);
            }
        }
    }
    return out;
}

ImageBuffer resized_crop(const ImageBuffer &image, CropRect rect, int out_width, int out_height) {
    std::vector<detail::ResizeTap> xs(static_cast<std::size_t>(out_width));
    for (int ox = 0; ox < out_width; ++ox) {
        xs[ox] = detail::resize_tap(ox, rect.width, out_width);
    }
    ImageBuffer out(out_width, out_height);
#pragma omp parallel for schedule(static)
    for (int oy = 0; oy < out_height; ++oy) {
        const auto ty = detail::resize_tap(oy, rect.height, out_height);
        const int y0 = rect.y + ty.i0;
        const int y1 = rect.y + ty.i1;
        for (int ox = 0; ox < out_width; ++ox) {
            const auto &tx = xs[ox];
            const int x0 = rect.x + tx.i0;
            const int x1 = rect.x + tx.i1;
            for (int c = 0; c < 3; ++c) {
                const double top = (1.0 - tx.lambda) * image.at(x0, y0, c) + tx.lambda * image.at(x1, y0, c);
                const double bottom = (1.0 - tx.lambda) * image.at(x0, y1, c) + tx.lambda * image.at(x1, y1, c);
                out.at(ox, oy, c) = to_u8((1.0 - ty.lambda) * top + ty.lambda * bottom);
            }
        }
    }
    return out;
}

ImageBuffer add_diffusion_noise(const ImageBuffer &image, double signal_scale, double noise_scale,
                                std::uint64_t noise_key) {
    ImageBuffer out(image.width(), image.height());
    const auto src = image.pixels();
    auto dst = out.pixels();
    const auto n = static_cast<std::ptrdiff_t>(src.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double eps = noise_scale == 0.0 ? 0.0 : Rng::normal_at(noise_key, static_cast<std::uint64_t>(i));
        dst[i] = to_u8(detail::diffuse(src[i], signal_scale, noise_scale, eps));
    }
    return out;
}

} // namespace ritual::kernels
