// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/transforms/transform.hpp"

#include "ritual/core/error.hpp"
#include "ritual/transforms/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace ritual {

namespace {

struct KindNames {
    TransformKind kind;
    std::string_view id;
    std::string_view display;
};

constexpr std::array<KindNames, 6> kNames = {{
    {TransformKind::HorizontalFlip, "hflip", "horizontal flip"},
    {TransformKind::VerticalFlip, "vflip", "vertical flip"},
    {TransformKind::Rotate, "rotate", "rotate"},
    {TransformKind::ColorJitter, "color_jitter", "color jitter"},
    {TransformKind::GaussianBlur, "gaussian_blur", "gaussian blur"},
    {TransformKind::Crop, "crop", "crop"},
}};

const KindNames &names_of(TransformKind kind) {
    return kNames[static_cast<std::size_t>(kind)];
}

std::string canonical(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch == '_' || ch == '-') {
            out.push_back(' ');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    return out;
}

CropRect sample_crop(Rng &rng, ImageSize source) {
    const double area = static_cast<double>(source.width) * source.height;
    const double log_lo = std::log(kCropRatioMin);
    const double log_hi = std::log(kCropRatioMax);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const double target = area * rng.uniform(kCropScaleMin, kCropScaleMax);
        const double ratio = std::exp(rng.uniform(log_lo, log_hi));
        const int w = static_cast<int>(std::lround(std::sqrt(target * ratio)));
        const int h = static_cast<int>(std::lround(std::sqrt(target / ratio)));
        if (w > 0 && h > 0 && w <= source.width && h <= source.height) {
            const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(source.height - h + 1)));
            const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(source.width - w + 1)));
            return {x, y, w, h};
        }
    }
    // Central crop clamped to the admissible aspect range.
    const double in_ratio = static_cast<double>(source.width) / source.height;
    int w = source.width;
    int h = source.height;
    if (in_ratio < kCropRatioMin) {
        h = std::min(source.height, static_cast<int>(std::lround(w / kCropRatioMin)));
    } else if (in_ratio > kCropRatioMax) {
        w = std::min(source.width, static_cast<int>(std::lround(h * kCropRatioMax)));
    }
    return {(source.width - w) / 2, (source.height - h) / 2, w, h};
}

double open_interval_degrees(Rng &rng) {
    for (;;) {
        const double d = -kRotateDegreesBound + 2.0 * kRotateDegreesBound * rng.uniform_open01();
        if (d > -kRotateDegreesBound && d < kRotateDegreesBound) {
            return d;
        }
    }
}

} // namespace

std::string_view to_string(TransformKind kind) noexcept {
    return names_of(kind).id;
}

std::string_view display_name(TransformKind kind) noexcept {
    return names_of(kind).display;
}

std::optional<TransformKind> parse_transform_kind(std::string_view text) {
    const std::string key = canonical(text);
    for (const auto &n : kNames) {
        if (key == canonical(n.id) || key == n.display) {
            return n.kind;
        }
    }
    return std::nullopt;
}

TransformParams sample_transform_params(TransformKind kind, Rng &rng, ImageSize source) {
    TransformParams p;
    p.kind = kind;
    switch (kind) {
    case TransformKind::HorizontalFlip:
    case TransformKind::VerticalFlip: break;
    case TransformKind::Rotate: p.rotate_degrees = open_interval_degrees(rng); break;
    case TransformKind::ColorJitter: {
        auto &j = p.jitter;
        for (std::size_t i = j.order.size() - 1; i > 0; --i) {
            std::swap(j.order[i], j.order[rng.below(i + 1)]);
        }
        j.brightness = rng.uniform(std::max(0.0, 1.0 - kJitterBrightness), 1.0 + kJitterBrightness);
        j.contrast = rng.uniform(std::max(0.0, 1.0 - kJitterContrast), 1.0 + kJitterContrast);
        j.saturation = rng.uniform(std::max(0.0, 1.0 - kJitterSaturation), 1.0 + kJitterSaturation);
        j.hue = rng.uniform(-kJitterHue, kJitterHue);
        break;
    }
    case TransformKind::GaussianBlur: p.blur_sigma = rng.uniform(kBlurSigmaMin, kBlurSigmaMax); break;
    case TransformKind::Crop: p.crop = sample_crop(rng, source); break;
    }
    return p;
}

TransformParams sample_transform(Rng &rng, ImageSize source) {
    const auto kind = kAllTransformKinds[rng.below(kAllTransformKinds.size())];
    return sample_transform_params(kind, rng, source);
}

void validate(const TransformParams &p, ImageSize source) {
    auto fail = [](const std::string &what) { throw Error(ErrorCode::InvalidParams, what); };
    switch (p.kind) {
    case TransformKind::HorizontalFlip:
    case TransformKind::VerticalFlip: break;
    case TransformKind::Rotate:
        if (!(p.rotate_degrees > -180.0 && p.rotate_degrees <= 180.0)) {
            fail("rotate degrees must lie in (-180, 180]");
        }
        break;
    case TransformKind::ColorJitter: {
        const auto &j = p.jitter;
        for (double f : {j.brightness, j.contrast, j.saturation}) {
            if (!(f >= 0.0 && f <= 2.0)) {
                fail("jitter factors must lie in [0, 2]");
            }
        }
        if (!(j.hue >= -0.5 && j.hue <= 0.5)) {
            fail("hue shift must lie in [-0.5, 0.5]");
        }
        auto sorted = j.order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != std::array<std::uint8_t, 4>{0, 1, 2, 3}) {
            fail("jitter order must be a permutation of 0..3");
        }
        break;
    }
    case TransformKind::GaussianBlur:
        if (!(p.blur_sigma >= kBlurSigmaMin && p.blur_sigma <= kBlurSigmaMax)) {
            fail("blur sigma must lie in [1.5, 2.0]");
        }
        break;
    case TransformKind::Crop: {
        const auto &c = p.crop;
        if (c.width < 1 || c.height < 1 || c.x < 0 || c.y < 0 || c.x + c.width > source.width ||
            c.y + c.height > source.height) {
            fail("crop rectangle must lie inside the source image");
        }
        break;
    }
    }
}

ImageBuffer apply_transform(const ImageBuffer &image, const TransformParams &p) {
    validate(p, image.size());
    switch (p.kind) {
    case TransformKind::HorizontalFlip: return kernels::flip_horizontal(image);
    case TransformKind::VerticalFlip: return kernels::flip_vertical(image);
    case TransformKind::Rotate:
        if (p.rotate_degrees == 0.0) {
            return image;
        }
        return kernels::rotate_bilinear(image, p.rotate_degrees);
    case TransformKind::ColorJitter: return kernels::color_jitter(image, p.jitter);
    case TransformKind::GaussianBlur: return kernels::gaussian_blur(image, kBlurKernelSize, p.blur_sigma);
    case TransformKind::Crop: return kernels::resized_crop(image, p.crop, kCropOutputSize, kCropOutputSize);
    }
    throw Error(ErrorCode::InvalidParams, "unknown transform kind");
}

nlohmann::json to_json(const TransformParams &p) {
    nlohmann::json j;
    j["kind"] = std::string(to_string(p.kind));
    switch (p.kind) {
    case TransformKind::HorizontalFlip:
    case TransformKind::VerticalFlip: break;
    case TransformKind::Rotate: j["degrees"] = p.rotate_degrees; break;
    case TransformKind::ColorJitter:
        j["brightness"] = p.jitter.brightness;
        j["contrast"] = p.jitter.contrast;
        j["saturation"] = p.jitter.saturation;
        j["hue"] = p.jitter.hue;
        j["order"] = p.jitter.order;
        break;
    case TransformKind::GaussianBlur:
        j["kernel_size"] = kBlurKernelSize;
        j["sigma"] = p.blur_sigma;
        break;
    case TransformKind::Crop:
        j["rect"] = {p.crop.x, p.crop.y, p.crop.width, p.crop.height};
        j["size"] = kCropOutputSize;
        break;
    }
    return j;
}

TransformParams transform_params_from_json(const nlohmann::json &j) {
    try {
        const auto kind = parse_transform_kind(j.at("kind").get<std::string>());
        if (!kind) {
            throw Error(ErrorCode::Parse, "unknown transform kind " + j.at("kind").dump());
        }
        TransformParams p;
        p.kind = *kind;
        switch (p.kind) {
        case TransformKind::HorizontalFlip:
        case TransformKind::VerticalFlip: break;
        case TransformKind::Rotate: p.rotate_degrees = j.at("degrees").get<double>(); break;
        case TransformKind::ColorJitter:
            p.jitter.brightness = j.at("brightness").get<double>();
            p.jitter.contrast = j.at("contrast").get<double>();
            p.jitter.saturation = j.at("saturation").get<double>();
            p.jitter.hue = j.at("hue").get<double>();
            if (j.contains("order")) {
                p.jitter.order = j.at("order").get<std::array<std::uint8_t, 4>>();
            }
            break;
        case TransformKind::GaussianBlur: p.blur_sigma = j.at("sigma").get<double>(); break;
        case TransformKind::Crop: {
            const auto r = j.at("rect").get<std::array<int, 4>>();
            p.crop = {r[0], r[1], r[2], r[3]};
            break;
        }
        }
        return p;
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::Parse, std::string("transform params: ") + e.what());
    }
}

} // namespace ritual
