// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#include "ritual/eval/benchmark.hpp"

#include "ritual/selector/selector.hpp"
#include "ritual/transforms/image_io.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

namespace ritual::eval {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

json timing_json(const std::vector<TaskOutcome> &outcomes, double wall, std::size_t workers) {
    double sum = 0, lo = 0, hi = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const double s = outcomes[i].seconds;
        sum += s;
        lo = i == 0 ? s : std::min(lo, s);
        hi = i == 0 ? s : std::max(hi, s);
    }
    const double mean = outcomes.empty() ? 0.0 : sum / static_cast<double>(outcomes.size());
    return {{"wall_seconds", wall},
            {"workers", workers},
            {"records", outcomes.size()},
            {"record_seconds", {{"mean", mean}, {"min", lo}, {"max", hi}, {"sum", sum}}}};
}

json record_base(std::size_t index, const TaskOutcome &o) {
    json r = {{"index", index}};
    if (o.result) {
        r["answer"] = o.result->text;
        r["tokens"] = o.result->tokens;
        r["transform"] = o.result->transform_used ? to_json(*o.result->transform_used) : json(nullptr);
        if (!o.result->selection.is_null()) {
            r["selected"] = o.result->selection.at("kind");
        }
        r["error"] = nullptr;
    } else {
        r["error"] = o.error;
    }
    return r;
}

std::string fmt(const std::optional<double> &v) {
    if (!v) {
        return "n/a";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return buf;
}

std::string fmt(double v) {
    return fmt(std::optional<double>(v));
}

json common_header(const char *benchmark, const RunOptions &options, const json &config_echo) {
    return {{"benchmark", benchmark},
            {"config", config_echo.is_null() ? json::object() : config_echo},
            {"strategy", to_json(options.cfg)}};
}

} // namespace

std::vector<TaskOutcome> run_tasks(const std::vector<Task> &tasks, const RunOptions &options) {
    options.cfg.validate();
    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, std::max<std::size_t>(1, tasks.size())));
    std::vector<ProviderHandle> handles;
    handles.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        handles.push_back(connect_provider(options.provider));
    }
    std::vector<TaskOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&](ProviderHandle &handle) {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            const auto start = Clock::now();
            TaskOutcome &out = outcomes[i];
            try {
                StrategyConfig cfg = options.cfg;
                cfg.seed = options.cfg.seed ^ static_cast<std::uint64_t>(i);
                out.result = run_session(read_image(tasks[i].image), tasks[i].prompt, handle, cfg);
            } catch (const std::exception &e) {
                out.result.reset();
                out.error = e.what();
            }
            out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        }
    };
    if (workers == 1) {
        work(handles.front());
    } else {
        std::vector<std::jthread> pool;
        for (auto &h : handles) {
            pool.emplace_back([&work, &h] { work(h); });
        }
    }
    return outcomes;
}

BenchmarkReport run_pope(const std::vector<PopeRecord> &records, const RunOptions &options,
                         const json &config_echo) {
    std::vector<Task> tasks;
    for (const auto &r : records) {
        tasks.push_back({r.image, r.question});
    }
    const auto start = Clock::now();
    const auto outcomes = run_tasks(tasks, options);
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();

    BenchmarkReport out;
    out.records = records.size();
    json rows = json::array();
    std::map<std::string, ConfusionMatrix> per_split;
    std::map<std::string, std::pair<std::size_t, std::size_t>> split_counts;  // (unparseable, failures)
    std::vector<std::string> split_order;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &rec = records[i];
        if (!per_split.contains(rec.split)) {
            split_order.push_back(rec.split);
            per_split[rec.split];
        }
        json row = record_base(i, outcomes[i]);
        row["id"] = rec.id;
        row["split"] = rec.split;
        row["image"] = rec.image.generic_string();
        row["question"] = rec.question;
        row["label"] = rec.truth_is_yes ? "yes" : "no";
        if (outcomes[i].result) {
            const YesNo pred = parse_yes_no(outcomes[i].result->text);
            row["prediction"] = to_string(pred);
            row["correct"] = pred == (rec.truth_is_yes ? YesNo::Yes : YesNo::No);
            per_split[rec.split].record(rec.truth_is_yes, pred);
            split_counts[rec.split].first += pred == YesNo::Unparseable ? 1 : 0;
        } else {
            row["prediction"] = nullptr;
            ++split_counts[rec.split].second;
            ++out.failures;
        }
        rows.push_back(std::move(row));
    }

    json splits = json::object();
    ConfusionMatrix overall;
    std::size_t unparseable = 0;
    std::ostringstream table;
    table << "split          records  acc     prec    rec     f1      unparseable  failures\n";
    auto add_line = [&](const std::string &name, const ConfusionMatrix &cm, std::size_t unp, std::size_t fail) {
        const auto m = pope_metrics(cm);
        char line[160];
        std::snprintf(line, sizeof line, "%-14s %-8llu %-7s %-7s %-7s %-7s %-12zu %zu\n", name.c_str(),
                      static_cast<unsigned long long>(cm.total() + fail), fmt(m.accuracy).c_str(),
                      fmt(m.precision).c_str(), fmt(m.recall).c_str(), fmt(m.f1).c_str(), unp, fail);
        table << line;
    };
    for (const auto &name : split_order) {
        const auto &cm = per_split[name];
        const auto [unp, fail] = split_counts[name];
        splits[name] = {{"confusion_matrix", to_json(cm)},
                        {"metrics", to_json(pope_metrics(cm))},
                        {"unparseable", unp},
                        {"failures", fail}};
        overall += cm;
        unparseable += unp;
        add_line(name, cm, unp, fail);
    }
    if (split_order.size() > 1) {
        add_line("overall", overall, unparseable, out.failures);
    }

    out.report = common_header("pope", options, config_echo);
    out.report["unparseable_policy"] = "answers naming both or neither of yes/no count as incorrect and as predicted no";
    out.report["records"] = std::move(rows);
    out.report["splits"] = std::move(splits);
    out.report["overall"] = {{"confusion_matrix", to_json(overall)},
                             {"metrics", to_json(pope_metrics(overall))},
                             {"unparseable", unparseable}};
    out.report["record_count"] = out.records;
    out.report["failures"] = out.failures;
    out.timing = timing_json(outcomes, wall, options.workers);
    out.summary = table.str();
    return out;
}

BenchmarkReport run_chair(const std::vector<ChairItem> &items, const ObjectLexicon &lexicon,
                          const RunOptions &options, const json &config_echo, const std::string &prompt) {
    std::vector<Task> tasks;
    for (const auto &item : items) {
        tasks.push_back({item.image, prompt});
    }
    const auto start = Clock::now();
    const auto outcomes = run_tasks(tasks, options);
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();

    BenchmarkReport out;
    out.records = items.size();
    json rows = json::array();
    std::vector<ChairImage> scored;
    for (std::size_t i = 0; i < items.size(); ++i) {
        json row = record_base(i, outcomes[i]);
        row["image_id"] = items[i].image_id;
        row["image"] = items[i].image.generic_string();
        if (outcomes[i].result) {
            ChairImage ci{outcomes[i].result->text, items[i].gt_objects};
            const auto one = chair_scores(std::span<const ChairImage>(&ci, 1), lexicon);
            std::set<std::string> mentioned;
            for (const auto &s : split_sentences(ci.caption)) {
                const auto objs = extract_objects(s, lexicon);
                mentioned.insert(objs.begin(), objs.end());
            }
            std::vector<std::string> hallucinated;
            for (const auto &o : mentioned) {
                if (!ci.gt_objects.contains(o)) {
                    hallucinated.push_back(o);
                }
            }
            row["mentioned"] = mentioned;
            row["hallucinated"] = hallucinated;
            row["chair_s"] = one.cs;
            row["chair_i"] = one.ci;
            scored.push_back(std::move(ci));
        } else {
            ++out.failures;
        }
        rows.push_back(std::move(row));
    }
    const auto scores = chair_scores(scored, lexicon);
    out.report = common_header("chair", options, config_echo);
    out.report["prompt"] = prompt;
    out.report["records"] = std::move(rows);
    out.report["scores"] = to_json(scores);
    out.report["record_count"] = out.records;
    out.report["failures"] = out.failures;
    out.timing = timing_json(outcomes, wall, options.workers);

    std::ostringstream table;
    table << "CHAIR_s " << fmt(100.0 * scores.cs) << "  CHAIR_i " << fmt(100.0 * scores.ci) << "  (percent; "
          << scores.sentences << " sentences, " << scores.mentioned_objects << " object mentions, " << out.failures
          << " failures)";
    if (scores.no_sentences || scores.no_mentions) {
        table << "  warning: empty denominator reported as 0";
    }
    table << "\n";
    out.summary = table.str();
    return out;
}

BenchmarkReport run_mme(const std::vector<MmeRecord> &records, const RunOptions &options, const json &config_echo) {
    std::vector<Task> tasks;
    for (const auto &r : records) {
        tasks.push_back({r.image, r.question});
    }
    const auto start = Clock::now();
    const auto outcomes = run_tasks(tasks, options);
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();

    BenchmarkReport out;
    out.records = records.size();
    std::vector<MmeRecord> predicted = records;
    json rows = json::array();
    std::set<std::pair<std::string, std::string>> broken;  // (category, image) with a failed decode
    for (std::size_t i = 0; i < records.size(); ++i) {
        json row = record_base(i, outcomes[i]);
        row["category"] = records[i].category;
        row["image"] = records[i].image;
        row["question"] = records[i].question;
        row["label"] = records[i].truth_is_yes ? "yes" : "no";
        if (outcomes[i].result) {
            predicted[i].prediction = parse_yes_no(outcomes[i].result->text);
            row["prediction"] = to_string(*predicted[i].prediction);
            row["correct"] = predicted[i].correct();
        } else {
            row["prediction"] = nullptr;
            broken.insert({records[i].category, records[i].image});
            ++out.failures;
        }
        rows.push_back(std::move(row));
    }
    std::vector<MmeRecord> complete;
    std::vector<std::string> categories;
    for (const auto &r : predicted) {
        if (broken.contains({r.category, r.image})) {
            continue;
        }
        if (std::find(categories.begin(), categories.end(), r.category) == categories.end()) {
            categories.push_back(r.category);
        }
        complete.push_back(r);
    }
    const auto &known = mme_categories();
    auto rank = [&](const std::string &c) {
        const auto it = std::find(known.begin(), known.end(), c);
        return std::pair<std::size_t, std::string>(static_cast<std::size_t>(it - known.begin()), c);
    };
    std::sort(categories.begin(), categories.end(),
              [&](const std::string &a, const std::string &b) { return rank(a) < rank(b); });

    json cats = json::array();
    double perception = 0, cognition = 0;
    std::ostringstream table;
    table << "category                 images  acc     acc+    score\n";
    for (const auto &c : categories) {
        const auto s = mme_score(complete, c);
        (is_mme_cognition(c) ? cognition : perception) += s.score;
        cats.push_back(to_json(s));
        char line[160];
        std::snprintf(line, sizeof line, "%-24s %-7zu %-7s %-7s %s\n", c.c_str(), s.images, fmt(s.acc).c_str(),
                      fmt(s.acc_plus).c_str(), fmt(s.score).c_str());
        table << line;
    }
    table << "perception " << fmt(perception) << "  cognition " << fmt(cognition) << "  failures " << out.failures
          << "\n";

    out.report = common_header("mme", options, config_echo);
    out.report["records"] = std::move(rows);
    out.report["categories"] = std::move(cats);
    out.report["perception_total"] = perception;
    out.report["cognition_total"] = cognition;
    out.report["dropped_images"] = broken.size();
    out.report["record_count"] = out.records;
    out.report["failures"] = out.failures;
    out.timing = timing_json(outcomes, wall, options.workers);
    out.summary = table.str();
    return out;
}

std::string records_csv(const json &report) {
    std::vector<std::string> columns;
    const auto &rows = report.at("records");
    for (const auto &row : rows) {
        for (const auto &[key, value] : row.items()) {
            if (value.is_primitive() && std::find(columns.begin(), columns.end(), key) == columns.end()) {
                columns.push_back(key);
            }
        }
    }
    auto quote = [](const std::string &s) {
        if (s.find_first_of(",\"\n\r") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char c : s) {
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        return q + "\"";
    };
    std::ostringstream csv;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        csv << (i ? "," : "") << quote(columns[i]);
    }
    csv << "\n";
    for (const auto &row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            std::string cell;
            if (row.contains(columns[i]) && !row[columns[i]].is_null()) {
                const auto &v = row[columns[i]];
                cell = v.is_string() ? v.get<std::string>() : v.dump();
            }
            csv << (i ? "," : "") << quote(cell);
        }
        csv << "\n";
    }
    return csv.str();
}

} // namespace ritual::eval
