// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/transforms/diffusion.hpp"

#include "ritual/core/error.hpp"
#include "ritual/transforms/kernels.hpp"

#include <cmath>
#include <string>

namespace ritual {

std::vector<double> linear_beta_schedule() {
    std::vector<double> betas(kDiffusionSteps);
    for (int i = 0; i < kDiffusionSteps; ++i) {
        betas[i] = kDiffusionBetaStart + (kDiffusionBetaEnd - kDiffusionBetaStart) * i / (kDiffusionSteps - 1);
    }
    return betas;
}

double alpha_bar(int t) {
    if (t < 0 || t > kDiffusionSteps) {
        throw Error(ErrorCode::InvalidParams, "diffusion step " + std::to_string(t) + " outside [0, 1000]");
    }
    static const std::vector<double> betas = linear_beta_schedule();
    double acc = 1.0;
    for (int i = 0; i < t; ++i) {
        acc *= 1.0 - betas[i];
    }
    return acc;
}

ImageBuffer diffusion_distort(const ImageBuffer &image, int t, Rng &rng) {
    const double abar = alpha_bar(t);
    const std::uint64_t key = rng.next_u64();
    if (t == 0) {
        return image;
    }
    return kernels::add_diffusion_noise(image, std::sqrt(abar), std::sqrt(1.0 - abar), key);
}

} // namespace ritual
