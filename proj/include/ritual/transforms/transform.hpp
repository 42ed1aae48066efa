// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/core/rng.hpp"
#include "ritual/transforms/image.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace ritual {

enum class TransformKind : std::uint8_t {
    HorizontalFlip,
    VerticalFlip,
    Rotate,
    ColorJitter,
    GaussianBlur,
    Crop,
};

inline constexpr std::array<TransformKind, 6> kAllTransformKinds = {
    TransformKind::HorizontalFlip, TransformKind::VerticalFlip, TransformKind::Rotate,
    TransformKind::ColorJitter,    TransformKind::GaussianBlur, TransformKind::Crop,
};

/// Short identifier used on the command line and in traces ("hflip", "crop", ...).
std::string_view to_string(TransformKind kind) noexcept;

/// Human-readable name ("horizontal flip", "gaussian blur", ...).
std::string_view display_name(TransformKind kind) noexcept;

/// Accepts the short identifier, the display name, or the display name with
/// '_' / '-' separators; case-insensitive.
std::optional<TransformKind> parse_transform_kind(std::string_view text);

// Pool parameters.
inline constexpr double kRotateDegreesBound = 180.0;   // open interval (-180, 180)
inline constexpr double kJitterBrightness = 1.0;
inline constexpr double kJitterContrast = 1.0;
inline constexpr double kJitterSaturation = 1.0;
inline constexpr double kJitterHue = 0.5;
inline constexpr int kBlurKernelSize = 13;
inline constexpr double kBlurSigmaMin = 1.5;
inline constexpr double kBlurSigmaMax = 2.0;
inline constexpr int kCropOutputSize = 336;
inline constexpr double kCropScaleMin = 0.08;
inline constexpr double kCropScaleMax = 1.0;
inline constexpr double kCropRatioMin = 3.0 / 4.0;
inline constexpr double kCropRatioMax = 4.0 / 3.0;

struct CropRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const CropRect &, const CropRect &) = default;
};

/// Multiplicative factors and a hue shift in turns. `order` is the sequence
/// in which the four adjustments run (0 brightness, 1 contrast, 2 saturation, 3 hue).
struct ColorJitterParams {
    double brightness = 1.0;
    double contrast = 1.0;
    double saturation = 1.0;
    double hue = 0.0;
    std::array<std::uint8_t, 4> order = {0, 1, 2, 3};

    friend bool operator==(const ColorJitterParams &, const ColorJitterParams &) = default;
};

/// One draw of the transformation pool. Fields not used by `kind` are ignored.
struct TransformParams {
    TransformKind kind = TransformKind::HorizontalFlip;
    double rotate_degrees = 0.0;
    ColorJitterParams jitter;
    double blur_sigma = kBlurSigmaMin;
    CropRect crop;

    friend bool operator==(const TransformParams &, const TransformParams &) = default;
};

/// Uniform kind, then that kind's parameters. Crop geometry depends on the
/// source size, hence the `source` argument.
TransformParams sample_transform(Rng &rng, ImageSize source);

/// Parameters for a fixed kind, drawn from the same ranges as `sample_transform`.
TransformParams sample_transform_params(TransformKind kind, Rng &rng, ImageSize source);

/// Throws ErrorCode::InvalidParams when a parameter is outside its range.
void validate(const TransformParams &params, ImageSize source);

/// Deterministic and Rng-free: the output depends only on the image and params.
ImageBuffer apply_transform(const ImageBuffer &image, const TransformParams &params);

nlohmann::json to_json(const TransformParams &params);
TransformParams transform_params_from_json(const nlohmann::json &j);

} // namespace ritual
