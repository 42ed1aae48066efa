// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Shared helpers for the test binaries: fixture locations, synthetic images,
// and a plain-arithmetic reference for the fusion rules.

#include "ritual/core/distribution.hpp"
#include "ritual/transforms/image.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#ifndef RITUAL_TEST_DIR
#error "RITUAL_TEST_DIR must point at the tests/ directory"
#endif

namespace ritual::test {

inline std::filesystem::path test_dir() {
    return RITUAL_TEST_DIR;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string &tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("ritual_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;

    const std::filesystem::path &path() const noexcept {
        return path_;
    }
    std::filesystem::path operator/(const std::string &name) const {
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path &path, const std::string &text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline nlohmann::json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("missing fixture " + path.string());
    }
    return nlohmann::json::parse(in);
}

/// Byte i of the pixel array is (31 i + 7) mod 256; also built by the
/// Python oracle.
inline ImageBuffer pattern_image(int width, int height) {
    std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = static_cast<std::uint8_t>((31 * i + 7) % 256);
    }
    return ImageBuffer(width, height, std::move(px));
}

/// Smooth, structured image (gradients plus soft blobs), a stand-in for a
/// photograph when pixel statistics matter.
inline ImageBuffer natural_image(int width, int height) {
    ImageBuffer img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double u = static_cast<double>(x) / width;
            const double v = static_cast<double>(y) / height;
            const double blob1 = std::exp(-((u - 0.3) * (u - 0.3) + (v - 0.4) * (v - 0.4)) * 18.0);
            const double blob2 = std::exp(-((u - 0.7) * (u - 0.7) + (v - 0.7) * (v - 0.7)) * 30.0);
            const double r = 40 + 150 * u + 60 * blob1;
            const double g = 30 + 120 * v + 90 * blob2;
            const double b = 200 - 120 * u * v + 40 * std::sin(6.0 * u) * std::cos(4.0 * v);
            img.at(x, y, 0) = static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
            img.at(x, y, 1) = static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
            img.at(x, y, 2) = static_cast<std::uint8_t>(std::clamp(b, 0.0, 255.0));
        }
    }
    return img;
}

inline ImageBuffer solid_image(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    ImageBuffer img(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
    }
    return img;
}

// Plain probability-vector arithmetic, written independently of the engine's
// fusion code.
namespace ref {

using Probs = std::vector<double>;

inline Probs probs(const TokenDistribution &d) {
    Probs p;
    for (double lw : d.log_weights()) {
        p.push_back(std::exp(lw));
    }
    return p;
}

/// Admitted tokens: p_i >= beta * max p, plus `eos` when given.
inline std::vector<bool> admitted(const Probs &p, double beta, std::optional<std::size_t> eos = std::nullopt) {
    const double top = *std::max_element(p.begin(), p.end());
    std::vector<bool> a(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        a[i] = p[i] > 0 && p[i] >= beta * top;
    }
    if (eos) {
        a[*eos] = true;
    }
    return a;
}

/// Zero outside the admitted set and below zero, then divide by the sum;
/// returns `fallback` when nothing positive is left.
inline Probs finish(Probs w, const std::vector<bool> &a, const Probs &fallback) {
    double sum = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!a[i] || w[i] < 0) {
            w[i] = 0;
        }
        sum += w[i];
    }
    if (sum <= 0) {
        Probs f = fallback;
        double fs = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] = a[i] ? f[i] : 0;
            fs += f[i];
        }
        for (double &x : f) {
            x /= fs;
        }
        return f;
    }
    for (double &x : w) {
        x /= sum;
    }
    return w;
}

inline Probs axpy(double a, const Probs &x, double b, const Probs &y) {
    Probs out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = a * x[i] + b * y[i];
    }
    return out;
}

inline Probs masked(const Probs &p, const std::vector<bool> &a) {
    return finish(p, a, p);
}

inline Probs ritual(const Probs &o, const Probs &t, double alpha, const std::vector<bool> &a) {
    return finish(axpy(1, o, alpha, t), a, o);
}

inline Probs vcd(const Probs &o, const Probs &d, double gamma, double delta, const std::vector<bool> &a) {
    return finish(axpy(gamma, o, -delta, d), a, o);
}

inline Probs m3id(const Probs &c, const Probs &u, double lambda, std::size_t t, const std::vector<bool> &a) {
    // (1 - e^{-lt}) / e^{-lt}
    const double decay = std::exp(-lambda * static_cast<double>(t));
    const double w = (1 - decay) / decay;
    return finish(axpy(1 + w, c, -w, u), a, c);
}

inline Probs combined(const Probs &t, const Probs &d, double zeta, const std::vector<bool> &a) {
    return finish(axpy(zeta, t, 1, d), a, d);
}

inline double max_abs_diff(const Probs &a, const Probs &b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace ref

} // namespace ritual::test
