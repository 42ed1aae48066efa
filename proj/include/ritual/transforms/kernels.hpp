// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/transforms/image.hpp"
#include "ritual/transforms/transform.hpp"

#include <cstdint>
#include <vector>

// Pixel kernels behind apply_transform and diffusion_distort.
//
// `ritual::kernels` is the production path: OpenMP-parallel over output rows.
// `ritual::kernels::reference` is a plain serial implementation kept for
// tests and the benchmark. Every kernel except the blur produces bit-identical
// output in both namespaces; the reference blur convolves with the full 2-D
// kernel in double precision and may differ from the separable parallel
// version by one intensity level.

namespace ritual::kernels {

std::vector<double> gaussian_kernel_1d(int size, double sigma);

/// Index into [0, n) with mirror reflection that does not repeat the edge sample.
int reflect_index(int i, int n) noexcept;

ImageBuffer flip_horizontal(const ImageBuffer &image);
ImageBuffer flip_vertical(const ImageBuffer &image);
ImageBuffer rotate_bilinear(const ImageBuffer &image, double degrees);
ImageBuffer color_jitter(const ImageBuffer &image, const ColorJitterParams &params);
ImageBuffer gaussian_blur(const ImageBuffer &image, int kernel_size, double sigma);
ImageBuffer resized_crop(const ImageBuffer &image, CropRect rect, int out_width, int out_height);
ImageBuffer add_diffusion_noise(const ImageBuffer &image, double signal_scale, double noise_scale,
                                std::uint64_t noise_key);

namespace reference {

ImageBuffer flip_horizontal(const ImageBuffer &image);
ImageBuffer flip_vertical(const ImageBuffer &image);
ImageBuffer rotate_bilinear(const ImageBuffer &image, double degrees);
ImageBuffer color_jitter(const ImageBuffer &image, const ColorJitterParams &params);
ImageBuffer gaussian_blur(const ImageBuffer &image, int kernel_size, double sigma);
ImageBuffer resized_crop(const ImageBuffer &image, CropRect rect, int out_width, int out_height);
ImageBuffer add_diffusion_noise(const ImageBuffer &image, double signal_scale, double noise_scale,
                                std::uint64_t noise_key);

} // namespace reference

} // namespace ritual::kernels
