// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/transforms/kernels.hpp"

#include "pixel_ops.hpp"

#include "ritual/core/rng.hpp"

namespace ritual::kernels::reference {

using detail::to_u8;

ImageBuffer flip_horizontal(const ImageBuffer &image) {
    ImageBuffer out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = image.at(image.width() - 1 - x, y, c);
            }
        }
    }
    return out;
}

ImageBuffer flip_vertical(const ImageBuffer &image) {
    ImageBuffer out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = image.at(x, image.height() - 1 - y, c);
            }
        }
    }
    return out;
}

ImageBuffer rotate_bilinear(const ImageBuffer &image, double degrees) {
    const auto frame = detail::rotation_frame(image, degrees);
    ImageBuffer out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            double fx;
            double fy;
            detail::rotate_source(frame, x, y, fx, fy);
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
    std::vector<double> px(image.pixels().size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = image.pixels()[i] / 255.0;
    }
    auto pixel = [&](int x, int y) { return px.data() + (static_cast<std::size_t>(y) * w + x) * 3; };

    for (std::uint8_t op : params.order) {
        if (op == 0 && params.brightness != 1.0) {
            for (double &v : px) {
                v = detail::clamp01(params.brightness * v);
            }
        } else if (op == 1 && params.contrast != 1.0) {
            double total = 0.0;
            for (int y = 0; y < h; ++y) {
                double row = 0.0;
                for (int x = 0; x < w; ++x) {
                    const double *p = pixel(x, y);
                    row += detail::gray(p[0], p[1], p[2]);
                }
                total += row;
            }
            const double mean = total / (static_cast<double>(w) * h);
            const double f = params.contrast;
            for (double &v : px) {
                v = detail::clamp01(f * v + (1.0 - f) * mean);
            }
        } else if (op == 2 && params.saturation != 1.0) {
            const double f = params.saturation;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    double *p = pixel(x, y);
                    const double g = detail::gray(p[0], p[1], p[2]);
                    for (int c = 0; c < 3; ++c) {
                        p[c] = detail::clamp01(f * p[c] + (1.0 - f) * g);
                    }
                }
            }
        } else if (op == 3 && params.hue != 0.0) {
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    double *p = pixel(x, y);
                    detail::shift_hue(p[0], p[1], p[2], params.hue);
                }
            }
        }
    }

    ImageBuffer out(w, h);
    for (std::size_t i = 0; i < px.size(); ++i) {
        out.pixels()[i] = to_u8(px[i] * 255.0);
    }
    return out;
}

ImageBuffer gaussian_blur(const ImageBuffer &image, int kernel_size, double sigma) {
    const auto k = gaussian_kernel_1d(kernel_size, sigma);
    const int half = kernel_size / 2;
    ImageBuffer out(image.width(), image.height());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int ty = 0; ty < kernel_size; ++ty) {
                    const int sy = reflect_index(y + ty - half, image.height());
                    for (int tx = 0; tx < kernel_size; ++tx) {
                        const int sx = reflect_index(x + tx - half, image.width());
                        acc += k[ty] * k[tx] * image.at(sx, sy, c);
                    }
                }
                out.at(x, y, c) = to_u8(acc);
            }
        }
    }
    return out;
}

ImageBuffer resized_crop(const ImageBuffer &image, CropRect rect, int out_width, int out_height) {
    ImageBuffer out(out_width, out_height);
    for (int oy = 0; oy < out_height; ++oy) {
        for (int ox = 0; ox < out_width; ++ox) {
            const auto tx = detail::resize_tap(ox, rect.width, out_width);
            const auto ty = detail::resize_tap(oy, rect.height, out_height);
            for (int c = 0; c < 3; ++c) {
                const double a = image.at(rect.x + tx.i0, rect.y + ty.i0, c);
                const double b = image.at(rect.x + tx.i1, rect.y + ty.i0, c);
                const double d = image.at(rect.x + tx.i0, rect.y + ty.i1, c);
                const double e = image.at(rect.x + tx.i1, rect.y + ty.i1, c);
                const double top = (1.0 - tx.lambda) * a + tx.lambda * b;
                const double bottom = (1.0 - tx.lambda) * d + tx.lambda * e;
                out.at(ox, oy, c) = to_u8((1.0 - ty.lambda) * top + ty.lambda * bottom);
            }
        }
    }
    return out;
}

ImageBuffer add_diffusion_noise(const ImageBuffer &image, double signal_scale, double noise_scale,
                                std::uint64_t noise_key) {
    // Walks the noise stream serially; element i of the stream feeds byte i.
    Rng stream(noise_key);
    ImageBuffer out(image.width(), image.height());
    for (std::size_t i = 0; i < image.pixels().size(); ++i) {
        const std::uint64_t a = stream.next_u64();
        const std::uint64_t b = stream.next_u64();
        double eps = 0.0;
        if (noise_scale != 0.0) {
            const double u1 = Rng::to_open_unit(a);
            const double u2 = Rng::to_unit(b);
            eps = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
        }
        out.pixels()[i] = to_u8(detail::diffuse(image.pixels()[i], signal_scale, noise_scale, eps));
    }
    return out;
}

} // namespace ritual::kernels::reference
