// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/eval/chair.hpp"

#include "ritual/core/error.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace ritual::eval {

namespace {

std::string normalize_surface(std::string_view text) {
    std::string out;
    for (const auto &w : tokenize_words(text)) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += w;
    }
    return out;
}

std::vector<std::string> singular_forms(const std::string &word) {
    std::vector<std::string> out;
    auto ends_with = [&](std::string_view suffix) {
        return word.size() > suffix.size() + 1 && word.compare(word.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with("ies")) {
        out.push_back(word.substr(0, word.size() - 3) + "y");
    }
    if (ends_with("es")) {
        out.push_back(word.substr(0, word.size() - 2));
    }
    if (ends_with("s") && !ends_with("ss")) {
        out.push_back(word.substr(0, word.size() - 1));
    }
    return out;
}

} // namespace

ObjectLexicon ObjectLexicon::parse(std::string_view text) {
    ObjectLexicon lexicon;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) {
            fields.push_back(normalize_surface(field));
        }
        if (fields.empty() || fields.front().empty()) {
            throw Error(ErrorCode::Parse, "lexicon line without a canonical name: '" + line + "'");
        }
        const std::string canonical = fields.front();
        fields.erase(fields.begin());
        lexicon.add(canonical, fields);
    }
    return lexicon;
}

ObjectLexicon ObjectLexicon::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open lexicon " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ObjectLexicon::add(const std::string &canonical, const std::vector<std::string> &synonyms) {
    const std::string canon = normalize_surface(canonical);
    vocabulary_.insert(canon);
    auto bind = [&](const std::string &raw) {
        const std::string surface = normalize_surface(raw);
        if (surface.empty()) {
            return;
        }
        const auto [it, inserted] = surfaces_.emplace(surface, canon);
        if (!inserted && it->second != canon) {
            throw Error(ErrorCode::Parse, "surface '" + surface + "' maps to both '" + it->second + "' and '" +
                                              canon + "'");
        }
        max_words_ = std::max<std::size_t>(max_words_, tokenize_words(surface).size());
    };
    bind(canon);
    for (const auto &s : synonyms) {
        bind(s);
    }
}

const std::string *ObjectLexicon::lookup(const std::string &surface) const {
    const auto it = surfaces_.find(surface);
    return it == surfaces_.end() ? nullptr : &it->second;
}

std::vector<std::string> tokenize_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }
    return words;
}

std::set<std::string> extract_objects(std::string_view text, const ObjectLexicon &lexicon) {
    const auto words = tokenize_words(text);
    std::set<std::string> found;
    std::size_t i = 0;
    while (i < words.size()) {
        std::size_t matched = 0;
        for (std::size_t len = std::min(lexicon.max_words(), words.size() - i); len >= 1 && matched == 0; --len) {
            std::string phrase;
            for (std::size_t k = 0; k + 1 < len; ++k) {
                phrase += words[i + k];
                phrase.push_back(' ');
            }
            const std::string &last = words[i + len - 1];
            if (const auto *canon = lexicon.lookup(phrase + last)) {
                found.insert(*canon);
                matched = len;
                break;
            }
            for (const auto &singular : singular_forms(last)) {
                if (const auto *canon = lexicon.lookup(phrase + singular)) {
                    found.insert(*canon);
                    matched = len;
                    break;
                }
            }
        }
        i += matched == 0 ? 1 : matched;
    }
    return found;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        if (current.find_first_not_of(" \t\r\n") != std::string::npos) {
            out.push_back(current);
        }
        current.clear();
    };
    for (char c : text) {
        if (c == '.' || c == '!' || c == '?') {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return out;
}

ChairScores chair_scores(std::span<const ChairImage> images, const ObjectLexicon &lexicon) {
    ChairScores s;
    for (const auto &img : images) {
        std::set<std::string> mentioned;
        for (const auto &sentence : split_sentences(img.caption)) {
            ++s.sentences;
            bool hallucinated = false;
            for (const auto &obj : extract_objects(sentence, lexicon)) {
                hallucinated = hallucinated || !img.gt_objects.contains(obj);
                mentioned.insert(obj);
            }
            s.hallucinated_sentences += hallucinated ? 1 : 0;
        }
        for (const auto &obj : mentioned) {
            ++s.mentioned_objects;
            s.hallucinated_objects += img.gt_objects.contains(obj) ? 0 : 1;
        }
    }
    s.no_sentences = s.sentences == 0;
    s.no_mentions = s.mentioned_objects == 0;
    s.cs = s.no_sentences ? 0.0 : static_cast<double>(s.hallucinated_sentences) / static_cast<double>(s.sentences);
    s.ci = s.no_mentions ? 0.0
                         : static_cast<double>(s.hallucinated_objects) / static_cast<double>(s.mentioned_objects);
    return s;
}

nlohmann::json to_json(const ChairScores &s) {
    return {{"chair_s", s.cs},
            {"chair_i", s.ci},
            {"sentences", s.sentences},
            {"hallucinated_sentences", s.hallucinated_sentences},
            {"mentioned_objects", s.mentioned_objects},
            {"hallucinated_objects", s.hallucinated_objects},
            {"no_sentences", s.no_sentences},
            {"no_mentions", s.no_mentions}};
}

} // namespace ritual::eval
