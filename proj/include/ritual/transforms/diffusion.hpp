// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/core/rng.hpp"
#include "ritual/transforms/image.hpp"

#include <vector>

namespace ritual {

inline constexpr int kDiffusionSteps = 1000;
inline constexpr double kDiffusionBetaStart = 1e-4;
inline constexpr double kDiffusionBetaEnd = 0.02;

/// Linear beta schedule over kDiffusionSteps steps.
std::vector<double> linear_beta_schedule();

/// Cumulative product of (1 - beta) over the first `t` steps; 1 for t = 0.
double alpha_bar(int t);

/// Forward-diffuses the image to step t: pixels are mapped to [-1, 1],
/// replaced by sqrt(abar) * x + sqrt(1 - abar) * eps, then mapped back and
/// clamped. Consumes exactly one draw from `rng` (the per-pixel noise key).
ImageBuffer diffusion_distort(const ImageBuffer &image, int t, Rng &rng);

} // namespace ritual
