// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace ritual::eval {

enum class YesNo { Yes, No, Unparseable };

std::string_view to_string(YesNo v) noexcept;

/// Case-insensitive whole-word search: "yes" without "no" is Yes, "no"
/// without "yes" is No, anything else is Unparseable.
YesNo parse_yes_no(std::string_view answer);

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept {
        return tp + fp + tn + fn;
    }

    /// Unparseable answers count as predicted negatives.
    void record(bool truth_is_yes, YesNo prediction) noexcept;

    ConfusionMatrix &operator+=(const ConfusionMatrix &o) noexcept;
    friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;
};

/// Percentages; a metric with a zero denominator is left empty.
struct PopeMetrics {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

PopeMetrics pope_metrics(const ConfusionMatrix &cm);

nlohmann::json to_json(const ConfusionMatrix &cm);
/// Undefined metrics serialize as null.
nlohmann::json to_json(const PopeMetrics &m);

/// One yes/no question of a perception/cognition category.
struct MmeRecord {
    std::string category;
    std::string image;
    std::string question;
    bool truth_is_yes = false;
    std::optional<YesNo> prediction;  // empty when the decode failed

    bool correct() const noexcept {
        return prediction && *prediction == (truth_is_yes ? YesNo::Yes : YesNo::No);
    }
};

struct MmeCategoryScore {
    std::string category;
    double acc = 0;       // percent of questions answered correctly
    double acc_plus = 0;  // percent of images with both questions correct
    double score = 0;     // acc + acc_plus, in [0, 200]
    std::size_t images = 0;
    std::size_t questions = 0;
};

/// Scores the records of `category` (others are ignored). Throws
/// ErrorCode::MalformedCategory unless every image has exactly two questions,
/// or when the category has no records.
MmeCategoryScore mme_score(std::span<const MmeRecord> records, std::string_view category);

nlohmann::json to_json(const MmeCategoryScore &s);

} // namespace ritual::eval
