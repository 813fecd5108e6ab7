// Copyright 2026 LogBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "logbench/errors.hpp"
#include "logbench/pipeline.hpp"

namespace {

struct CliOptions {
    std::string corpus;
    std::string prompt_spec;
    std::string provider;
    std::string rules;
    std::string out;
    std::string mode;
    std::string manifest;
    std::string reviews;
    std::vector<std::string> score_files;
    int max_concurrency = 0;
    double echo_threshold = 0.9;
    bool resume = false;
};

logbench::RunConfig to_run_config(const CliOptions& options) {
    logbench::RunConfig config;
    config.corpus_dir = options.corpus;
    config.prompt_spec_path = options.prompt_spec;
    config.provider_config_path = options.provider;
    config.rules_path = options.rules;
    config.out_dir = options.out;
    config.echo_threshold = options.echo_threshold;
    if (!options.mode.empty()) {
        config.mode_override = logbench::prompt_mode_from_string(options.mode);
    }
    if (options.max_concurrency > 0) config.max_concurrency_override = options.max_concurrency;
    if (!options.manifest.empty()) config.manifest_path = options.manifest;
    if (!options.reviews.empty()) config.reviews_path = options.reviews;
    return config;
}

void add_common_inputs(CLI::App* cmd, CliOptions& options, bool needs_provider) {
    cmd->add_option("--corpus", options.corpus, "Corpus directory of per-project CSV files")
        ->required();
    cmd->add_option("--prompt-spec", options.prompt_spec, "Prompt configuration file")->required();
    if (needs_provider) {
        cmd->add_option("--provider", options.provider, "Provider configuration file")->required();
    }
    cmd->add_option("--mode", options.mode, "Prompt mode override: zero or few")
        ->check(CLI::IsMember({"zero", "few"}));
    cmd->add_option("--manifest", options.manifest, "Expected per-project counts (project=count)");
    cmd->add_option("--out", options.out, "Output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"logbench: LLM log parsing benchmark harness"};
    app.require_subcommand(1);

    CliOptions options;

    CLI::App* query = app.add_subcommand("query", "Render prompts and collect model responses");
    add_common_inputs(query, options, true);
    query->add_flag("--resume", options.resume,
                    "Continue into an existing response cache (resumption is always on; this flag "
                    "documents intent)");
    query->add_option("--max-concurrency", options.max_concurrency,
                      "Maximum in-flight requests (overrides provider config)");

    CLI::App* score = app.add_subcommand("score", "Extract, normalize and score cached responses");
    add_common_inputs(score, options, true);
    score->add_option("--rules", options.rules, "Normalization rule file")->required();
    score->add_option("--reviews", options.reviews, "Apply an edited review file before scoring");
    score->add_option("--echo-threshold", options.echo_threshold,
                      "Echoed-prompt detection threshold (default 0.9)");

    CLI::App* report = app.add_subcommand("report", "Aggregate score files into rankings");
    report->add_option("--out", options.out, "Directory holding score files; receives the report")
        ->required();
    report->add_option("scores", options.score_files,
                       "Explicit score files (default: all scores_*.csv under --out)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (query->parsed()) {
            auto summary = logbench::run_query(to_run_config(options));
            std::cout << "queried " << summary.prompt_count << " prompts for "
                      << summary.provider_id << "/" << summary.mode << "\n";
            for (const auto& [status, count] : summary.status_counts) {
                std::cout << "  " << status << ": " << count << "\n";
            }
        } else if (score->parsed()) {
            auto result = logbench::run_score(to_run_config(options));
            std::cout << "scored " << result.rows.size() << " records for "
                      << result.meta.provider_id << "/" << result.meta.mode << "\n";
            for (const auto& [cls, count] : result.extraction_counts) {
                std::cout << "  " << cls << ": " << count << "\n";
            }
            if (!result.missing_records.empty()) {
                std::cout << "  missing from cache: " << result.missing_records.size() << " (";
                for (std::size_t i = 0; i < result.missing_records.size(); ++i) {
                    if (i) std::cout << ", ";
                    if (i == 8) {
                        std::cout << "...";
                        break;
                    }
                    std::cout << result.missing_records[i];
                }
                std::cout << ")\n";
            }
        } else if (report->parsed()) {
            std::vector<std::filesystem::path> files(options.score_files.begin(),
                                                     options.score_files.end());
            auto result = logbench::run_report(to_run_config(options), files);
            std::cout << "report written to " << result.report_json_path.string() << "\n";
            std::cout << "  configurations: " << result.aggregates.size() << "\n";
            std::cout << "  rank tables: " << result.rank_tables.size() << "\n";
            if (result.comparisons) {
                std::cout << "  mean vs median correlation: "
                          << result.comparisons->mean_vs_median.pooled_coefficient << "\n";
                std::cout << "  standard vs normalized correlation: "
                          << result.comparisons->standard_vs_normalized.pooled_coefficient << "\n";
                std::cout << "  ED vs LCS correlation: "
                          << result.comparisons->ed_vs_lcs.pooled_coefficient << "\n";
            }
        }
    } catch (const logbench::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
