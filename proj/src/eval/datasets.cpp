// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/eval/datasets.hpp"

#include "ritual/core/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

namespace ritual::eval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

json read_json(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
}

std::optional<bool> parse_label(std::string text) {
    text = lower(trim(text));
    if (text == "yes") {
        return true;
    }
    if (text == "no") {
        return false;
    }
    return std::nullopt;
}

std::string split_from_name(const fs::path &path) {
    const std::string name = lower(path.filename().string());
    for (const char *split : {"adversarial", "popular", "random"}) {
        if (name.find(split) != std::string::npos) {
            return split;
        }
    }
    return "all";
}

} // namespace

std::vector<PopeRecord> load_pope(const fs::path &path, const std::optional<fs::path> &image_dir) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    const fs::path base = image_dir ? *image_dir : path.parent_path();
    const std::string file_split = split_from_name(path);
    std::vector<PopeRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        try {
            const json j = json::parse(line);
            PopeRecord r;
            if (j.contains("question_id")) {
                r.id = j["question_id"].is_string() ? j["question_id"].get<std::string>() : j["question_id"].dump();
            } else {
                r.id = std::to_string(line_no);
            }
            if (j.contains("question")) {
                r.question = j["question"].get<std::string>();
            } else {
                r.question = j.at("text").get<std::string>();
            }
            const auto label = parse_label(j.contains("label") ? j["label"].get<std::string>()
                                                               : j.at("answer").get<std::string>());
            if (!label) {
                throw Error(ErrorCode::Parse, where + ": label must be yes or no");
            }
            r.truth_is_yes = *label;
            const fs::path image = j.at("image").get<std::string>();
            r.image = image.is_absolute() ? image : base / image;
            r.split = j.contains("split") ? lower(j["split"].get<std::string>()) : file_split;
            records.push_back(std::move(r));
        } catch (const json::exception &e) {
            throw Error(ErrorCode::Parse, where + ": " + e.what());
        }
    }
    return records;
}

std::vector<ChairItem> load_chair(const fs::path &captions, const fs::path &instances, const fs::path &image_dir,
                                  const ObjectLexicon &lexicon, std::optional<std::size_t> limit) {
    const json inst = read_json(instances);
    const json caps = read_json(captions);
    try {
        std::map<std::int64_t, std::string> category_names;
        for (const auto &c : inst.at("categories")) {
            category_names[c.at("id").get<std::int64_t>()] = c.at("name").get<std::string>();
        }
        std::map<std::int64_t, ChairItem> items;
        for (const auto &img : inst.at("images")) {
            ChairItem item;
            item.image_id = img.at("id").get<std::int64_t>();
            item.image = image_dir / img.at("file_name").get<std::string>();
            items.emplace(item.image_id, std::move(item));
        }
        auto canonical_of = [&](const std::string &name) {
            const auto found = extract_objects(name, lexicon);
            if (found.size() == 1) {
                return *found.begin();
            }
            throw Error(ErrorCode::Parse, "category '" + name + "' is not in the object lexicon");
        };
        if (inst.contains("annotations")) {
            for (const auto &a : inst["annotations"]) {
                const auto it = items.find(a.at("image_id").get<std::int64_t>());
                const auto cat = category_names.find(a.at("category_id").get<std::int64_t>());
                if (it == items.end() || cat == category_names.end()) {
                    continue;
                }
                it->second.gt_objects.insert(canonical_of(cat->second));
            }
        }
        const json &caption_list = caps.is_array() ? caps : caps.at("annotations");
        for (const auto &c : caption_list) {
            const auto it = items.find(c.at("image_id").get<std::int64_t>());
            if (it == items.end()) {
                continue;
            }
            const auto objects = extract_objects(c.at("caption").get<std::string>(), lexicon);
            it->second.gt_objects.insert(objects.begin(), objects.end());
        }
        std::vector<ChairItem> out;
        for (auto &[id, item] : items) {
            if (limit && out.size() >= *limit) {
                break;
            }
            out.push_back(std::move(item));
        }
        return out;
    } catch (const json::exception &e) {
        throw Error(ErrorCode::Parse, "coco annotations: " + std::string(e.what()));
    }
}

const std::vector<std::string> &mme_categories() {
    static const std::vector<std::string> names = {
        "existence", "count",    "position", "color", "posters",
        "celebrity", "scene",    "landmark", "artwork", "OCR",
        "commonsense_reasoning", "numerical_calculation", "text_translation", "code_reasoning",
    };
    return names;
}

bool is_mme_cognition(std::string_view category) {
    return category == "commonsense_reasoning" || category == "numerical_calculation" ||
           category == "text_translation" || category == "code_reasoning";
}

std::vector<MmeRecord> load_mme(const fs::path &root) {
    if (!fs::is_directory(root)) {
        throw Error(ErrorCode::Io, "MME root " + root.string() + " is not a directory");
    }
    std::vector<fs::path> categories;
    for (const auto &entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) {
            categories.push_back(entry.path());
        }
    }
    std::sort(categories.begin(), categories.end());
    std::vector<MmeRecord> records;
    for (const auto &dir : categories) {
        const bool split_layout = fs::is_directory(dir / "questions_answers_YN");
        const fs::path question_dir = split_layout ? dir / "questions_answers_YN" : dir;
        const fs::path image_dir = split_layout ? dir / "images" : dir;
        std::vector<fs::path> question_files;
        for (const auto &entry : fs::directory_iterator(question_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                question_files.push_back(entry.path());
            }
        }
        std::sort(question_files.begin(), question_files.end());
        for (const auto &qf : question_files) {
            fs::path image;
            for (const char *ext : {".jpg", ".png", ".jpeg", ".JPG", ".PNG"}) {
                const fs::path candidate = image_dir / (qf.stem().string() + ext);
                if (fs::exists(candidate)) {
                    image = candidate;
                    break;
                }
            }
            if (image.empty()) {
                throw Error(ErrorCode::Io, "no image for question file " + qf.string());
            }
            std::ifstream in(qf);
            std::string line;
            while (std::getline(in, line)) {
                if (trim(line).empty()) {
                    continue;
                }
                const auto tab = line.rfind('\t');
                if (tab == std::string::npos) {
                    throw Error(ErrorCode::Parse, qf.string() + ": expected question<TAB>answer");
                }
                const auto label = parse_label(line.substr(tab + 1));
                if (!label) {
                    throw Error(ErrorCode::Parse, qf.string() + ": answer must be Yes or No");
                }
                MmeRecord r;
                r.category = dir.filename().string();
                r.image = image.string();
                r.question = trim(line.substr(0, tab));
                r.truth_is_yes = *label;
                records.push_back(std::move(r));
            }
        }
    }
    return records;
}

} // namespace ritual::eval
