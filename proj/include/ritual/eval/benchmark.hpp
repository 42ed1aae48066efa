// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ritual/decoding/decode.hpp"
#include "ritual/eval/chair.hpp"
#include "ritual/eval/datasets.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ritual::eval {

inline constexpr const char *kDefaultCaptionPrompt = "Please describe this image in detail.";

struct RunOptions {
    std::string provider = "mock:";
    StrategyConfig cfg;
    std::size_t workers = 1;
};

/// One decode to run: the image is read inside the worker.
struct Task {
    std::filesystem::path image;
    std::string prompt;
};

struct TaskOutcome {
    std::optional<DecodeResult> result;  // empty on failure
    std::string error;
    double seconds = 0;
};

/// Runs every task with its own session seed `cfg.seed ^ index`. Each worker
/// holds its own provider handle; all handshakes happen before any task
/// starts, so an unreachable provider throws instead of failing every record.
/// Outcomes are returned in task order regardless of the worker count.
std::vector<TaskOutcome> run_tasks(const std::vector<Task> &tasks, const RunOptions &options);

struct BenchmarkReport {
    /// Deterministic for a fixed config against a deterministic provider.
    nlohmann::json report;
    /// Wall-clock statistics, kept apart from `report` so the report is byte-stable.
    nlohmann::json timing;
    std::size_t records = 0;
    std::size_t failures = 0;
    /// Human-readable table of the headline metrics.
    std::string summary;
};

BenchmarkReport run_pope(const std::vector<PopeRecord> &records, const RunOptions &options,
                         const nlohmann::json &config_echo);

BenchmarkReport run_chair(const std::vector<ChairItem> &items, const ObjectLexicon &lexicon,
                          const RunOptions &options, const nlohmann::json &config_echo,
                          const std::string &prompt = kDefaultCaptionPrompt);

/// An image whose question pair has a failed decode is dropped as a whole, so
/// category scores stay defined over complete pairs.
BenchmarkReport run_mme(const std::vector<MmeRecord> &records, const RunOptions &options,
                        const nlohmann::json &config_echo);

/// Per-record rows of a report as CSV (header included).
std::string records_csv(const nlohmann::json &report);

} // namespace ritual::eval
