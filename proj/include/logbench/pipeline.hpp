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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logbench/analysis.hpp"
#include "logbench/llm_client.hpp"
#include "logbench/scorefile.hpp"

namespace logbench {

struct RunConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path prompt_spec_path;
    std::filesystem::path provider_config_path;
    std::filesystem::path rules_path;
    std::filesystem::path out_dir;
    std::optional<PromptMode> mode_override;
    std::optional<int> max_concurrency_override;
    std::optional<std::filesystem::path> manifest_path;
    std::optional<std::filesystem::path> reviews_path;  // apply during score
    double echo_threshold = 0.9;
};

std::filesystem::path cache_path(const RunConfig& config, const std::string& provider_id,
                                 const std::string& mode);
std::filesystem::path score_path(const std::filesystem::path& out_dir,
                                 const std::string& provider_id, const std::string& mode);

struct QuerySummary {
    std::string provider_id;
    std::string mode;
    std::size_t prompt_count = 0;
    std::size_t served_from_cache = 0;
    std::map<std::string, std::size_t> status_counts;
};

// Renders prompts for the whole corpus and dispatches them through the
// provider, appending to the response cache. Resumable: cached fingerprints
// are never re-sent. The only stage that can touch the network.
QuerySummary run_query(const RunConfig& config);

// Offline: cache -> extraction -> normalization -> metrics. Emits the score
// file, the extraction summary, and the review queue. Records missing from
// the cache are listed in the score header and skipped.
ScoreFile run_score(const RunConfig& config);

struct ReportResult {
    AggregateReport aggregates;
    std::map<MetricId, RankTable> rank_tables;
    std::optional<ComparisonReport> comparisons;  // absent with one configuration
    std::filesystem::path report_json_path;
};

// Offline: consumes every scores_*.csv under out_dir (or the explicit
// list), refuses to mix corpus hashes, and emits report.json plus the
// parsing-accuracy and similarity text tables.
ReportResult run_report(const RunConfig& config,
                        const std::vector<std::filesystem::path>& score_files = {});

}  // namespace logbench
