// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/eval/chair.hpp"
#include "ritual/eval/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ritual::eval {

struct PopeRecord {
    std::string id;  // question_id when present, else the 1-based line number
    std::string question;
    bool truth_is_yes = false;
    std::filesystem::path image;
    std::string split;  // random, popular, adversarial, or "all" when unknown
};

/// One JSON object per line with "question" (or "text"), "label" (or
/// "answer") of yes/no, and "image". The split comes from a "split" field,
/// else from the file name, else "all". Relative image paths resolve against
/// `image_dir`, defaulting to the file's directory. Throws Io / Parse.
std::vector<PopeRecord> load_pope(const std::filesystem::path &path,
                                  const std::optional<std::filesystem::path> &image_dir = std::nullopt);

struct ChairItem {
    std::int64_t image_id = 0;
    std::filesystem::path image;
    std::set<std::string> gt_objects;
};

/// COCO-style inputs: `instances` holds "images" (id, file_name),
/// "annotations" (image_id, category_id) and "categories" (id, name);
/// `captions` is either the same layout with caption annotations or a plain
/// array of {"image_id", "caption"}. Ground-truth objects per image are the
/// annotated categories plus every object named in its reference captions.
/// Items are ordered by image id; `limit` keeps the first N.
std::vector<ChairItem> load_chair(const std::filesystem::path &captions, const std::filesystem::path &instances,
                                  const std::filesystem::path &image_dir, const ObjectLexicon &lexicon,
                                  std::optional<std::size_t> limit = std::nullopt);

/// The fourteen categories, perception first.
const std::vector<std::string> &mme_categories();
bool is_mme_cognition(std::string_view category);

/// One folder per category under `root`, each either flat (image + same-stem
/// .txt) or split into images/ and questions_answers_YN/. Question files hold
/// one "question<TAB>answer" per line. Categories and images are ordered by
/// name.
std::vector<MmeRecord> load_mme(const std::filesystem::path &root);

} // namespace ritual::eval
