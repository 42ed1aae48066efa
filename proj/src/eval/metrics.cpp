// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/eval/metrics.hpp"

#include "ritual/core/error.hpp"

#include <cctype>
#include <map>

namespace ritual::eval {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool contains_word(std::string_view text, std::string_view word) {
    for (std::size_t i = 0; i + word.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < word.size(); ++k) {
            if (std::tolower(static_cast<unsigned char>(text[i + k])) != word[k]) {
                match = false;
                break;
            }
        }
        if (!match) {
            continue;
        }
        const bool left_ok = i == 0 || !is_word_char(text[i - 1]);
        const bool right_ok = i + word.size() == text.size() || !is_word_char(text[i + word.size()]);
        if (left_ok && right_ok) {
            return true;
        }
    }
    return false;
}

std::optional<double> percent(std::uint64_t num, std::uint64_t den) {
    if (den == 0) {
        return std::nullopt;
    }
    return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json optional_json(const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

std::string_view to_string(YesNo v) noexcept {
    switch (v) {
    case YesNo::Yes: return "yes";
    case YesNo::No: return "no";
    case YesNo::Unparseable: return "unparseable";
    }
    return "?";
}

YesNo parse_yes_no(std::string_view answer) {
    const bool yes = contains_word(answer, "yes");
    const bool no = contains_word(answer, "no");
    if (yes && !no) {
        return YesNo::Yes;
    }
    if (no && !yes) {
        return YesNo::No;
    }
    return YesNo::Unparseable;
}

void ConfusionMatrix::record(bool truth_is_yes, YesNo prediction) noexcept {
    const bool predicted_yes = prediction == YesNo::Yes;
    if (truth_is_yes) {
        (predicted_yes ? tp : fn) += 1;
    } else {
        (predicted_yes ? fp : tn) += 1;
    }
}

ConfusionMatrix &ConfusionMatrix::operator+=(const ConfusionMatrix &o) noexcept {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

PopeMetrics pope_metrics(const ConfusionMatrix &cm) {
    PopeMetrics m;
    m.accuracy = percent(cm.tp + cm.tn, cm.total());
    m.precision = percent(cm.tp, cm.tp + cm.fp);
    m.recall = percent(cm.tp, cm.tp + cm.fn);
    // F1 = 2 tp / (2 tp + fp + fn), the harmonic mean of precision and recall.
    if (m.precision && m.recall) {
        m.f1 = percent(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
    }
    return m;
}

nlohmann::json to_json(const ConfusionMatrix &cm) {
    return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}, {"total", cm.total()}};
}

nlohmann::json to_json(const PopeMetrics &m) {
    return {{"accuracy", optional_json(m.accuracy)},
            {"precision", optional_json(m.precision)},
            {"recall", optional_json(m.recall)},
            {"f1", optional_json(m.f1)}};
}

MmeCategoryScore mme_score(std::span<const MmeRecord> records, std::string_view category) {
    std::map<std::string, std::pair<int, int>> per_image;  // image -> (questions, correct)
    std::size_t questions = 0;
    std::size_t correct = 0;
    for (const auto &r : records) {
        if (r.category != category) {
            continue;
        }
        auto &slot = per_image[r.image];
        slot.first += 1;
        slot.second += r.correct() ? 1 : 0;
        ++questions;
        correct += r.correct() ? 1 : 0;
    }
    if (per_image.empty()) {
        throw Error(ErrorCode::MalformedCategory, "category '" + std::string(category) + "' has no records");
    }
    std::size_t both = 0;
    for (const auto &[image, slot] : per_image) {
        if (slot.first != 2) {
            throw Error(ErrorCode::MalformedCategory, "image '" + image + "' in category '" + std::string(category) +
                                                          "' has " + std::to_string(slot.first) +
                                                          " questions, expected 2");
        }
        both += slot.second == 2 ? 1 : 0;
    }
    MmeCategoryScore s;
    s.category = std::string(category);
    s.images = per_image.size();
    s.questions = questions;
    s.acc = 100.0 * static_cast<double>(correct) / static_cast<double>(questions);
    s.acc_plus = 100.0 * static_cast<double>(both) / static_cast<double>(s.images);
    s.score = s.acc + s.acc_plus;
    return s;
}

nlohmann::json to_json(const MmeCategoryScore &s) {
    return {{"category", s.category}, {"acc", s.acc},         {"acc_plus", s.acc_plus},
            {"score", s.score},       {"images", s.images}, {"questions", s.questions}};
}

} // namespace ritual::eval
