// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ritual::eval {

/// Canonical object names plus surface forms (synonyms) that map onto them.
class ObjectLexicon {
public:
    /// Each line: `canonical[, synonym...]`; blank lines and lines starting
    /// with '#' are ignored. Surfaces are lower-cased and whitespace-collapsed.
    /// Throws ErrorCode::Parse when a surface maps to two canonicals.
    static ObjectLexicon parse(std::string_view text);
    static ObjectLexicon load(const std::filesystem::path &path);

    /// Adds `canonical` (also as its own surface form) and its synonyms.
    void add(const std::string &canonical, const std::vector<std::string> &synonyms = {});

    const std::set<std::string> &vocabulary() const noexcept {
        return vocabulary_;
    }
    const std::map<std::string, std::string> &surfaces() const noexcept {
        return surfaces_;
    }
    std::size_t max_words() const noexcept {
        return max_words_;
    }

    /// Canonical for an exact surface form, or nullptr.
    const std::string *lookup(const std::string &surface) const;

private:
    std::set<std::string> vocabulary_;
    std::map<std::string, std::string> surfaces_;
    std::size_t max_words_ = 1;
};

/// Lower-case alphanumeric words.
std::vector<std::string> tokenize_words(std::string_view text);

/// Canonical objects mentioned in `text`. Scans left to right, matching the
/// longest surface form first; a word that matches nothing is retried in
/// singular form (-ies to -y, -es, -s).
std::set<std::string> extract_objects(std::string_view text, const ObjectLexicon &lexicon);

/// Splits on '.', '!' and '?', dropping empty (whitespace-only) pieces.
std::vector<std::string> split_sentences(std::string_view text);

struct ChairImage {
    std::string caption;
    std::set<std::string> gt_objects;
};

struct ChairScores {
    double cs = 0;  // hallucinated sentences / sentences
    double ci = 0;  // hallucinated objects / mentioned objects (both per-image sets)
    std::size_t sentences = 0;
    std::size_t hallucinated_sentences = 0;
    std::size_t mentioned_objects = 0;
    std::size_t hallucinated_objects = 0;
    bool no_sentences = false;  // cs reported as 0
    bool no_mentions = false;   // ci reported as 0
};

ChairScores chair_scores(std::span<const ChairImage> images, const ObjectLexicon &lexicon);

nlohmann::json to_json(const ChairScores &s);

} // namespace ritual::eval
