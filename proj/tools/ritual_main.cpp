// Copyright 2026 The ritual-decode Authors
// SPDX-License-Identifier: Apache-2.0

// ritual: decode, evaluate, inspect transforms, and serve the mock provider.
//
// Exit codes: 0 success, 1 more than 10% of benchmark records failed,
// 2 usage, configuration, data or provider errors.

#include "ritual/core/error.hpp"
#include "ritual/eval/benchmark.hpp"
#include "ritual/provider/wire.hpp"
#include "ritual/selector/selector.hpp"
#include "ritual/transforms/image_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>
#include <thread>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ritual;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;
constexpr double kMaxFailureRate = 0.10;

#ifndef RITUAL_DATA_DIR
#define RITUAL_DATA_DIR "data"
#endif

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const fs::path &path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::Io, "cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw Error(ErrorCode::Io, "short write to " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

void write_atomic(const fs::path &path, std::span<const std::uint8_t> bytes) {
    write_atomic(path, std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

struct DecodingFlags {
    std::string provider = "mock:";
    std::string strategy = "base";
    std::string sampler = "greedy";
    double alpha = 3.0;
    double beta = 0.1;
    double gamma = 2.0;
    double delta = 1.0;
    double lambda = 0.1;
    double zeta = 3.0;
    int noise_steps = 500;
    std::size_t max_new_tokens = 0;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string output_dir = ".";

    CLI::Option *gamma_opt = nullptr;
    CLI::Option *delta_opt = nullptr;
    CLI::Option *zeta_opt = nullptr;
    CLI::Option *max_tokens_opt = nullptr;

    void attach(CLI::App &app) {
        app.add_option("--provider", provider, "Provider endpoint: mock:[opts], exec:<command>, tcp:<host>:<port>")
            ->envname("RITUAL_PROVIDER")
            ->capture_default_str();
        app.add_option("--strategy", strategy, "base, ritual, vcd, m3id, ritual_vcd, ritual_m3id, ritual_plus")
            ->capture_default_str()
            ->check([](const std::string &s) {
                return parse_strategy(s) ? std::string() : "unknown strategy '" + s + "'";
            });
        app.add_option("--sampler", sampler, "greedy or multinomial")
            ->capture_default_str()
            ->check([](const std::string &s) {
                return parse_sampler(s) ? std::string() : "unknown sampler '" + s + "'";
            });
        app.add_option("--alpha", alpha, "Weight of the transformed-image distribution")->capture_default_str();
        app.add_option("--beta", beta, "Plausibility threshold relative to the top probability")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 1.0));
        gamma_opt = app.add_option("--gamma", gamma, "Weight of the original distribution in the contrast "
                                                     "(default 2; 1 for ritual_vcd)");
        delta_opt = app.add_option("--delta", delta, "Weight of the distorted distribution in the contrast "
                                                     "(default 1; 0.1 for ritual_vcd)");
        app.add_option("--lambda", lambda, "Growth rate of the text-only contrast weight")->capture_default_str();
        zeta_opt = app.add_option("--zeta", zeta, "Weight of the transformed stream in combined strategies "
                                                  "(default 3; 3.5 for ritual_m3id)");
        app.add_option("--noise-steps", noise_steps, "Diffusion steps for the distorted image")
            ->capture_default_str()
            ->check(CLI::Range(1, 1000));
        max_tokens_opt = app.add_option("--max-new-tokens", max_new_tokens,
                                        "Generation budget (default 64 for captions, 16 for yes/no)");
        app.add_option("--seed", seed, "Base seed; benchmark record i uses seed ^ i")->capture_default_str();
        app.add_option("--workers", workers, "Concurrent decode sessions during eval")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app.add_option("--output-dir", output_dir, "Directory for traces and reports")->capture_default_str();
    }

    StrategyConfig resolve(std::size_t default_max_tokens) const {
        StrategyConfig cfg = StrategyConfig::for_strategy(*parse_strategy(strategy));
        cfg.sampler = *parse_sampler(sampler);
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.lambda = lambda;
        cfg.noise_steps = noise_steps;
        cfg.seed = seed;
        if (gamma_opt->count() > 0) {
            cfg.gamma = gamma;
        }
        if (delta_opt->count() > 0) {
            cfg.delta = delta;
        }
        if (zeta_opt->count() > 0) {
            cfg.zeta = zeta;
        }
        cfg.max_new_tokens = max_tokens_opt->count() > 0 ? max_new_tokens : default_max_tokens;
        cfg.validate();
        return cfg;
    }

    /// Everything that determines results. Output locations and the worker
    /// count are left out (the timing sidecar records workers), so reruns
    /// into another directory or with more workers produce identical reports.
    json echo(const StrategyConfig &cfg) const {
        return {{"provider", provider}, {"decoding", to_json(cfg)}};
    }
};

int finish_benchmark(const eval::BenchmarkReport &run, const fs::path &report_path,
                     const std::optional<fs::path> &csv_path) {
    write_atomic(report_path, run.report.dump(2) + "\n");
    fs::path timing_path = report_path;
    timing_path.replace_extension(".timing.json");
    write_atomic(timing_path, run.timing.dump(2) + "\n");
    if (csv_path) {
        write_atomic(*csv_path, eval::records_csv(run.report));
    }
    std::cout << run.summary;
    std::cout << "report: " << report_path.string() << "\n";
    const double rate = run.records == 0 ? 0.0 : static_cast<double>(run.failures) / static_cast<double>(run.records);
    if (run.failures > 0) {
        std::cerr << run.failures << " of " << run.records << " records failed\n";
    }
    return rate > kMaxFailureRate ? kExitPartial : kExitOk;
}

void require_file(const fs::path &p, const char *what) {
    if (!fs::exists(p)) {
        throw Error(ErrorCode::Io, std::string(what) + " not found: " + p.string());
    }
}

// Blocks SIGINT/SIGTERM in every thread and returns a thread that requests
// stop on `source` when one arrives.
std::jthread stop_on_signal(std::stop_source source) {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    return std::jthread([set, source]() mutable {
        int sig = 0;
        sigwait(&set, &sig);
        source.request_stop();
    });
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Transformation-augmented decoding engine and benchmark harness"};
    app.set_config("--config", "", "Key-value config file (key = value; CLI flags override)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    DecodingFlags flags;
    flags.attach(app);

    // decode
    auto *decode_cmd = app.add_subcommand("decode", "Generate one response for an image and prompt");
    std::string image_path, prompt;
    std::string trace_path;
    decode_cmd->add_option("image", image_path, "PNG or JPEG image")->required();
    decode_cmd->add_option("prompt", prompt, "Text prompt")->required();
    decode_cmd->add_option("--trace", trace_path, "Trace JSON path (default <output-dir>/trace.json)");

    // eval
    auto *eval_cmd = app.add_subcommand("eval", "Run a benchmark");
    eval_cmd->require_subcommand(1);
    std::string report_path, csv_path, image_dir;
    auto add_report_flags = [&](CLI::App *sub) {
        sub->add_option("--report", report_path, "Report path (default <output-dir>/<benchmark>_report.json)");
        sub->add_option("--csv", csv_path, "Also write per-record rows as CSV");
    };
    auto *pope_cmd = eval_cmd->add_subcommand("pope", "Yes/no object probing");
    std::string pope_file;
    pope_cmd->add_option("questions", pope_file, "Question file, one JSON object per line")->required();
    pope_cmd->add_option("--image-dir", image_dir, "Base for relative image paths (default: the file's directory)");
    add_report_flags(pope_cmd);

    auto *chair_cmd = eval_cmd->add_subcommand("chair", "Caption object hallucination");
    std::string captions_file, instances_file, lexicon_file = std::string(RITUAL_DATA_DIR) + "/coco_synonyms.txt";
    std::string caption_prompt = eval::kDefaultCaptionPrompt;
    std::size_t limit = 0;
    chair_cmd->add_option("captions", captions_file, "Reference captions (COCO layout or [{image_id, caption}])")
        ->required();
    chair_cmd->add_option("instances", instances_file, "COCO object annotations")->required();
    chair_cmd->add_option("--image-dir", image_dir, "Directory holding the images (default: annotations' directory)");
    chair_cmd->add_option("--lexicon", lexicon_file, "Object synonym file")->capture_default_str();
    chair_cmd->add_option("--prompt", caption_prompt, "Captioning prompt")->capture_default_str();
    chair_cmd->add_option("--limit", limit, "Caption only the first N images (0 = all)");
    add_report_flags(chair_cmd);

    auto *mme_cmd = eval_cmd->add_subcommand("mme", "Perception and cognition yes/no categories");
    std::string mme_root;
    mme_cmd->add_option("root", mme_root, "Directory with one folder per category")->required();
    add_report_flags(mme_cmd);

    // transform
    auto *transform_cmd = app.add_subcommand("transform", "Apply one image transformation");
    std::string kind_name, out_path = "transformed.png";
    transform_cmd->add_option("image", image_path, "PNG or JPEG image")->required();
    transform_cmd->add_option("--kind", kind_name, "hflip, vflip, rotate, color_jitter, gaussian_blur, crop "
                                                   "(default: random)");
    transform_cmd->add_option("-o,--out", out_path, "Output PNG")->capture_default_str();

    // mock-serve
    auto *serve_cmd = app.add_subcommand("mock-serve", "Serve the mock provider over the wire protocol");
    int port = -1;
    bool use_stdio = false;
    std::string host = "127.0.0.1", mock_options;
    auto *port_opt = serve_cmd->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
    serve_cmd->add_flag("--stdio", use_stdio, "Serve on standard input/output")->excludes(port_opt);
    serve_cmd->add_option("--host", host, "Listen address")->capture_default_str();
    serve_cmd->add_option("--mock", mock_options, "Mock options, e.g. vocab=5,ignore_image,script=replies.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*decode_cmd) {
            const StrategyConfig cfg = flags.resolve(kCaptionMaxNewTokens);
            require_file(image_path, "image");
            ProviderHandle provider = connect_provider(flags.provider);
            const fs::path trace = trace_path.empty() ? fs::path(flags.output_dir) / "trace.json" : fs::path(trace_path);
            try {
                const DecodeResult result = run_session(read_image(image_path), prompt, provider, cfg);
                json j = to_json(result, cfg);
                j["provider"] = flags.provider;
                write_atomic(trace, j.dump(2) + "\n");
                std::cout << result.text << "\n";
                std::cout << "trace: " << trace.string() << "\n";
                return kExitOk;
            } catch (const DecodeAborted &e) {
                json j = to_json(e.partial(), cfg);
                j["error"] = e.what();
                write_atomic(trace, j.dump(2) + "\n");
                std::cerr << "error: " << e.what() << "\npartial trace: " << trace.string() << "\n";
                return kExitUsage;
            }
        }

        if (*eval_cmd) {
            const std::optional<fs::path> csv = csv_path.empty() ? std::nullopt : std::optional<fs::path>(csv_path);
            auto report_for = [&](const char *name) {
                return report_path.empty() ? fs::path(flags.output_dir) / (std::string(name) + "_report.json")
                                           : fs::path(report_path);
            };
            if (*pope_cmd) {
                const StrategyConfig cfg = flags.resolve(kYesNoMaxNewTokens);
                require_file(pope_file, "question file");
                const auto records = eval::load_pope(
                    pope_file, image_dir.empty() ? std::nullopt : std::optional<fs::path>(image_dir));
                json echo = flags.echo(cfg);
                echo["dataset"] = pope_file;
                echo["image_dir"] = image_dir;
                const auto run = eval::run_pope(records, {flags.provider, cfg, flags.workers}, echo);
                return finish_benchmark(run, report_for("pope"), csv);
            }
            if (*chair_cmd) {
                const StrategyConfig cfg = flags.resolve(kCaptionMaxNewTokens);
                require_file(captions_file, "captions file");
                require_file(instances_file, "annotations file");
                require_file(lexicon_file, "lexicon");
                const auto lexicon = eval::ObjectLexicon::load(lexicon_file);
                const fs::path dir = image_dir.empty() ? fs::path(instances_file).parent_path() : fs::path(image_dir);
                const auto items = eval::load_chair(captions_file, instances_file, dir, lexicon,
                                                    limit == 0 ? std::nullopt : std::optional<std::size_t>(limit));
                json echo = flags.echo(cfg);
                echo["captions"] = captions_file;
                echo["instances"] = instances_file;
                echo["image_dir"] = dir.generic_string();
                echo["lexicon"] = lexicon_file;
                echo["limit"] = limit;
                const auto run =
                    eval::run_chair(items, lexicon, {flags.provider, cfg, flags.workers}, echo, caption_prompt);
                return finish_benchmark(run, report_for("chair"), csv);
            }
            if (*mme_cmd) {
                const StrategyConfig cfg = flags.resolve(kYesNoMaxNewTokens);
                const auto records = eval::load_mme(mme_root);
                json echo = flags.echo(cfg);
                echo["dataset"] = mme_root;
                const auto run = eval::run_mme(records, {flags.provider, cfg, flags.workers}, echo);
                return finish_benchmark(run, report_for("mme"), csv);
            }
        }

        if (*transform_cmd) {
            require_file(image_path, "image");
            const ImageBuffer image = read_image(image_path);
            Rng rng(flags.seed);
            TransformParams params;
            if (kind_name.empty()) {
                params = sample_transform(rng, image.size());
            } else {
                const auto kind = parse_transform_kind(kind_name);
                if (!kind) {
                    std::cerr << "error: unknown transform kind '" << kind_name << "'\n";
                    return kExitUsage;
                }
                params = sample_transform_params(*kind, rng, image.size());
            }
            const ImageBuffer out = apply_transform(image, params);
            write_atomic(out_path, encode_png(out));
            std::cout << to_json(params).dump() << "\n";
            std::cout << "wrote " << out_path << " (" << out.size().width << "x" << out.size().height << ")\n";
            return kExitOk;
        }

        if (*serve_cmd) {
            if (!use_stdio && port < 0) {
                std::cerr << "error: mock-serve needs --port or --stdio\n";
                return kExitUsage;
            }
            wire::MockServer server(parse_mock_options(mock_options));
            if (use_stdio) {
                wire::serve_stream(server, STDIN_FILENO, STDOUT_FILENO);
                return kExitOk;
            }
            std::stop_source stop;
            auto watcher = stop_on_signal(stop);
            wire::TcpServer tcp(server, static_cast<std::uint16_t>(port), host);
            std::cout << "listening on " << host << ":" << tcp.port() << std::endl;
            tcp.run(stop.get_token());
            watcher.detach();
            return kExitOk;
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
