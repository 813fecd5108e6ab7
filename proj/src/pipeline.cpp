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

#include "logbench/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "logbench/csv.hpp"
#include "logbench/errors.hpp"
#include "logbench/extraction.hpp"
#include "logbench/hashing.hpp"
#include "logbench/normalization.hpp"
#include "logbench/text.hpp"

namespace logbench {

namespace fs = std::filesystem;

namespace {

struct LoadedInputs {
    Corpus corpus;
    PromptSpec prompt_spec;
    ProviderConfig provider;
    std::string prompt_hash;
};

LoadedInputs load_inputs(const RunConfig& config) {
    LoadedInputs inputs;
    std::optional<Manifest> manifest;
    if (config.manifest_path) manifest = load_manifest(*config.manifest_path);
    inputs.corpus = load_corpus(config.corpus_dir, manifest);

    inputs.prompt_spec = load_prompt_spec(config.prompt_spec_path);
    if (config.mode_override) inputs.prompt_spec.mode = *config.mode_override;
    validate_prompt_spec(inputs.prompt_spec);
    inputs.prompt_hash = sha256_file_hex(config.prompt_spec_path);
    if (config.mode_override) {
        // The effective mode is part of what shaped the prompts.
        inputs.prompt_hash =
            sha256_hex(inputs.prompt_hash + ":" + to_string(*config.mode_override));
    }

    auto offending = check_examples_against_corpus(inputs.prompt_spec, inputs.corpus);
    if (!offending.empty()) {
        throw ConfigError("prompt example equals a corpus message under evaluation: \"" +
                          offending.front() + "\"");
    }

    inputs.provider = load_provider_config(config.provider_config_path);
    if (config.max_concurrency_override) {
        inputs.provider.max_concurrency = *config.max_concurrency_override;
        validate_provider_config(inputs.provider);
    }
    return inputs;
}

std::vector<RenderedPrompt> render_all(const PromptSpec& spec, const Corpus& corpus) {
    std::vector<RenderedPrompt> prompts;
    prompts.reserve(corpus.records.size());
    for (const auto& record : corpus.records) {
        prompts.push_back(render_prompt(spec, record));
    }
    return prompts;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

fs::path cache_path(const RunConfig& config, const std::string& provider_id,
                    const std::string& mode) {
    return config.out_dir / ("responses_" + provider_id + "_" + mode + ".jsonl");
}

fs::path score_path(const fs::path& out_dir, const std::string& provider_id,
                    const std::string& mode) {
    return out_dir / ("scores_" + provider_id + "_" + mode + ".csv");
}

QuerySummary run_query(const RunConfig& config) {
    LoadedInputs inputs = load_inputs(config);
    fs::create_directories(config.out_dir);

    std::string mode = to_string(inputs.prompt_spec.mode);
    ResponseCache cache(cache_path(config, inputs.provider.provider_id, mode));
    std::size_t cached_before = cache.size();

    auto prompts = render_all(inputs.prompt_spec, inputs.corpus);
    auto responses = run_batch(inputs.provider, prompts, cache);

    QuerySummary summary;
    summary.provider_id = inputs.provider.provider_id;
    summary.mode = mode;
    summary.prompt_count = prompts.size();
    summary.served_from_cache = std::min(cached_before, prompts.size());
    for (const auto& response : responses) {
        summary.status_counts[to_string(response.status)]++;
    }

    std::ostringstream text;
    text << "provider=" << summary.provider_id << " mode=" << summary.mode << '\n';
    text << "prompts=" << summary.prompt_count << '\n';
    for (const auto& [status, count] : summary.status_counts) {
        text << status << '=' << count << '\n';
    }
    write_text_file(config.out_dir / ("query_summary_" + summary.provider_id + "_" + mode + ".txt"),
                    text.str());
    return summary;
}

ScoreFile run_score(const RunConfig& config) {
    LoadedInputs inputs = load_inputs(config);
    auto rules = load_rules(config.rules_path);
    fs::create_directories(config.out_dir);

    std::string mode = to_string(inputs.prompt_spec.mode);
    fs::path cache_file = cache_path(config, inputs.provider.provider_id, mode);
    if (!fs::exists(cache_file)) {
        throw ConfigError("response cache not found: " + cache_file.string() +
                          " (run the query stage first)");
    }
    ResponseCache cache(cache_file);
    if (cache.size() == 0) {
        throw ConfigError("response cache is empty: " + cache_file.string());
    }

    ExtractionOptions extraction_options;
    extraction_options.tpl_open = inputs.prompt_spec.tpl_open;
    extraction_options.tpl_close = inputs.prompt_spec.tpl_close;
    extraction_options.echo_threshold = config.echo_threshold;

    ScoreFile result;
    result.meta.corpus_hash = corpus_hash(inputs.corpus);
    result.meta.rules_hash = sha256_file_hex(config.rules_path);
    result.meta.prompt_hash = inputs.prompt_hash;
    result.meta.provider_id = inputs.provider.provider_id;
    result.meta.model_name = inputs.provider.model_name;
    result.meta.mode = mode;
    result.meta.temperature = inputs.provider.temperature;
    result.meta.max_output_tokens = inputs.provider.max_output_tokens;
    result.meta.max_retries = inputs.provider.max_retries;
    result.meta.echo_threshold = config.echo_threshold;

    std::vector<TemplateCandidate> candidates;
    std::vector<ModelResponse> responses;
    std::vector<const LogRecord*> scored_records;
    for (const auto& record : inputs.corpus.records) {
        RenderedPrompt prompt = render_prompt(inputs.prompt_spec, record);
        std::string fingerprint =
            request_fingerprint(prompt.text, inputs.provider.model_name, inputs.provider.temperature);
        const ModelResponse* response = cache.find(fingerprint);
        if (!response) {
            result.missing_records.push_back(record.record_id);
            continue;
        }
        ModelResponse bound = *response;
        bound.record_id = record.record_id;  // identical messages share a response
        candidates.push_back(extract_template(bound, prompt.text, extraction_options));
        responses.push_back(std::move(bound));
        scored_records.push_back(&record);
    }

    if (config.reviews_path) {
        candidates = apply_reviews(std::move(candidates), *config.reviews_path);
    }

    write_review_queue(config.out_dir / ("review_" + inputs.provider.provider_id + "_" + mode + ".csv"),
                       candidates, responses);

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const TemplateCandidate& candidate = candidates[i];
        std::optional<std::string> normalized;
        if (candidate.raw_template) {
            normalized = normalize(*candidate.raw_template, rules).text;
        }
        result.rows.push_back(
            score_record(normalized, *scored_records[i], inputs.provider.provider_id, mode));
    }

    for (const auto& [cls, count] : extraction_class_counts(candidates)) {
        result.extraction_counts[to_string(cls)] = count;
    }

    write_score_file(score_path(config.out_dir, inputs.provider.provider_id, mode), result);

    std::ostringstream text;
    for (const auto& [cls, count] : result.extraction_counts) {
        text << cls << '=' << count << '\n';
    }
    text << "missing=" << result.missing_records.size() << '\n';
    write_text_file(
        config.out_dir / ("extraction_" + inputs.provider.provider_id + "_" + mode + ".txt"),
        text.str());
    return result;
}

namespace {

nlohmann::json variants_to_json(const MetricVariants& variants) {
    return nlohmann::json{{"median", variants.median},
                          {"mean", variants.mean},
                          {"norm_median", variants.norm_median},
                          {"norm_sum", variants.norm_sum}};
}

nlohmann::json comparison_to_json(const Comparison& comparison) {
    nlohmann::json per_variant = nlohmann::json::object();
    for (const auto& [pair, value] : comparison.per_variant) {
        per_variant[to_string(pair.first) + "~" + to_string(pair.second)] = value;
    }
    auto points_to_json = [](const std::vector<RankPairPoint>& points) {
        nlohmann::json array = nlohmann::json::array();
        for (const auto& point : points) {
            array.push_back({{"config", point.config.label()},
                             {"metric_a", to_string(point.metric_a)},
                             {"metric_b", to_string(point.metric_b)},
                             {"rank_a", point.rank_a},
                             {"rank_b", point.rank_b}});
        }
        return array;
    };
    return nlohmann::json{{"pooled_coefficient", comparison.pooled_coefficient},
                          {"per_variant", per_variant},
                          {"points", points_to_json(comparison.points)},
                          {"deviations", points_to_json(comparison.deviations)}};
}

// Projects as rows, configurations as columns.
std::string format_table(const std::string& title, const std::vector<std::string>& projects,
                         const std::vector<std::string>& config_labels,
                         const std::vector<std::vector<std::string>>& cells,
                         const std::vector<std::string>& total_row) {
    std::vector<std::size_t> widths;
    widths.push_back(std::string("Project").size());
    for (const auto& project : projects) widths[0] = std::max(widths[0], project.size());
    widths[0] = std::max(widths[0], std::string("Total").size());
    for (std::size_t c = 0; c < config_labels.size(); ++c) {
        std::size_t width = config_labels[c].size();
        for (const auto& row : cells) width = std::max(width, row[c].size());
        width = std::max(width, total_row[c].size());
        widths.push_back(width);
    }

    auto pad = [](const std::string& s, std::size_t width) {
        return s + std::string(width - s.size(), ' ');
    };

    std::ostringstream out;
    out << title << '\n';
    out << pad("Project", widths[0]);
    for (std::size_t c = 0; c < config_labels.size(); ++c) {
        out << "  " << pad(config_labels[c], widths[c + 1]);
    }
    out << '\n';
    for (std::size_t r = 0; r < projects.size(); ++r) {
        out << pad(projects[r], widths[0]);
        for (std::size_t c = 0; c < config_labels.size(); ++c) {
            out << "  " << pad(cells[r][c], widths[c + 1]);
        }
        out << '\n';
    }
    out << pad("Total", widths[0]);
    for (std::size_t c = 0; c < config_labels.size(); ++c) {
        out << "  " << pad(total_row[c], widths[c + 1]);
    }
    out << '\n';
    return out.str();
}

}  // namespace

ReportResult run_report(const RunConfig& config, const std::vector<fs::path>& score_files) {
    std::vector<fs::path> files = score_files;
    if (files.empty()) {
        if (!fs::is_directory(config.out_dir)) {
            throw ConfigError("output directory not found: " + config.out_dir.string());
        }
        for (const auto& entry : fs::directory_iterator(config.out_dir)) {
            const std::string name = entry.path().filename().string();
            if (entry.is_regular_file() && name.rfind("scores_", 0) == 0 &&
                entry.path().extension() == ".csv") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
    }
    if (files.empty()) {
        throw ConfigError("no score files found under " + config.out_dir.string());
    }

    std::vector<ScoreFile> loaded;
    for (const auto& file : files) loaded.push_back(read_score_file(file));

    const std::string& corpus_hash = loaded.front().meta.corpus_hash;
    for (std::size_t i = 1; i < loaded.size(); ++i) {
        if (loaded[i].meta.corpus_hash != corpus_hash) {
            throw ValidationError("refusing to mix corpus hashes: " + files[i].string() +
                                  " was scored against a different corpus");
        }
    }

    std::vector<ScoreRow> rows;
    for (const auto& file : loaded) {
        rows.insert(rows.end(), file.rows.begin(), file.rows.end());
    }

    ReportResult result;
    result.aggregates = aggregate(rows);

    if (result.aggregates.size() >= 2) {
        for (MetricId metric : kAllMetrics) {
            result.rank_tables.emplace(metric, rank(result.aggregates, metric));
        }
        result.comparisons = comparison_report(result.rank_tables);
    } else {
        // A single configuration gets trivial rank tables and no
        // correlation section.
        for (MetricId metric : kAllMetrics) {
            RankTable table;
            table.metric = metric;
            table.ranks.emplace(result.aggregates.begin()->first, 1);
            result.rank_tables.emplace(metric, table);
        }
    }

    // --- report.json ---
    nlohmann::json configs_meta = nlohmann::json::object();
    for (const auto& file : loaded) {
        ConfigKey key{file.meta.provider_id, file.meta.mode};
        nlohmann::json extraction = nlohmann::json::object();
        for (const auto& [cls, count] : file.extraction_counts) extraction[cls] = count;
        configs_meta[key.label()] = {
            {"provider_id", file.meta.provider_id},
            {"model_name", file.meta.model_name},
            {"mode", file.meta.mode},
            {"temperature", file.meta.temperature},
            {"max_output_tokens", file.meta.max_output_tokens},
            {"max_retries", file.meta.max_retries},
            {"echo_threshold", file.meta.echo_threshold},
            {"rules_hash", file.meta.rules_hash},
            {"prompt_hash", file.meta.prompt_hash},
            {"extraction_counts", extraction},
            {"missing_records", file.missing_records},
        };
    }

    nlohmann::json aggregates_json = nlohmann::json::object();
    for (const auto& [key, aggregate] : result.aggregates) {
        nlohmann::json projects = nlohmann::json::object();
        for (const auto& [project, pa] : aggregate.projects) {
            projects[project] = {{"row_count", pa.row_count},
                                 {"pa_total", pa.pa_total},
                                 {"ed", variants_to_json(pa.ed)},
                                 {"lcs", variants_to_json(pa.lcs)}};
        }
        aggregates_json[key.label()] = {{"row_count", aggregate.row_count},
                                        {"pa_total", aggregate.pa_total},
                                        {"ed", variants_to_json(aggregate.ed)},
                                        {"lcs", variants_to_json(aggregate.lcs)},
                                        {"projects", projects}};
    }

    nlohmann::json rank_tables_json = nlohmann::json::object();
    for (const auto& [metric, table] : result.rank_tables) {
        nlohmann::json ranks = nlohmann::json::object();
        for (const auto& [key, value] : table.ranks) ranks[key.label()] = value;
        rank_tables_json[to_string(metric)] = {
            {"direction", ascending_is_better(metric) ? "ascending_is_better" : "descending_is_better"},
            {"tie_policy", "competition"},
            {"tie_policy_applied", table.tie_policy_applied},
            {"ranks", ranks}};
    }

    nlohmann::json report_json{
        {"schema", "logbench-report-v1"},
        {"metadata", {{"corpus_hash", corpus_hash}, {"configurations", configs_meta}}},
        {"aggregates", aggregates_json},
        {"rank_tables", rank_tables_json},
    };
    if (result.comparisons) {
        report_json["correlations"] = {
            {"mean_vs_median", comparison_to_json(result.comparisons->mean_vs_median)},
            {"standard_vs_normalized",
             comparison_to_json(result.comparisons->standard_vs_normalized)},
            {"ed_vs_lcs", comparison_to_json(result.comparisons->ed_vs_lcs)},
        };
    }

    fs::create_directories(config.out_dir);
    result.report_json_path = config.out_dir / "report.json";
    write_text_file(result.report_json_path, report_json.dump(2) + "\n");

    // --- text tables ---
    std::vector<std::string> projects;
    for (const auto& [key, aggregate] : result.aggregates) {
        for (const auto& [project, pa] : aggregate.projects) {
            if (std::find(projects.begin(), projects.end(), project) == projects.end()) {
                projects.push_back(project);
            }
        }
    }
    std::sort(projects.begin(), projects.end());

    std::vector<ConfigKey> keys;
    std::vector<std::string> labels;
    for (const auto& [key, aggregate] : result.aggregates) {
        keys.push_back(key);
        labels.push_back(key.label());
    }

    auto build_cells = [&](auto&& per_project, auto&& total) {
        std::vector<std::vector<std::string>> cells;
        for (const auto& project : projects) {
            std::vector<std::string> row;
            for (const auto& key : keys) {
                const auto& aggregate = result.aggregates.at(key);
                auto it = aggregate.projects.find(project);
                row.push_back(it == aggregate.projects.end() ? std::string("-")
                                                             : per_project(it->second));
            }
            cells.push_back(std::move(row));
        }
        std::vector<std::string> total_row;
        for (const auto& key : keys) total_row.push_back(total(result.aggregates.at(key)));
        return std::make_pair(cells, total_row);
    };

    auto [pa_cells, pa_total] = build_cells(
        [](const ProjectAggregate& pa) { return std::to_string(pa.pa_total); },
        [](const ConfigAggregate& aggregate) { return std::to_string(aggregate.pa_total); });
    write_text_file(config.out_dir / "table_parsing_accuracy.txt",
                    format_table("Parsing accuracy (correctly parsed messages)", projects, labels,
                                 pa_cells, pa_total));

    auto [ed_cells, ed_total] = build_cells(
        [](const ProjectAggregate& pa) { return format_double(pa.ed.median, 1); },
        [](const ConfigAggregate& aggregate) { return format_double(aggregate.ed.median, 1); });
    auto [lcs_cells, lcs_total] = build_cells(
        [](const ProjectAggregate& pa) { return format_double(pa.lcs.median, 1); },
        [](const ConfigAggregate& aggregate) { return format_double(aggregate.lcs.median, 1); });
    auto [es_cells, es_total] = build_cells(
        [](const ProjectAggregate& pa) { return format_double(pa.ed.norm_sum, 2); },
        [](const ConfigAggregate& aggregate) { return format_double(aggregate.ed.norm_sum, 2); });
    auto [lcsn_cells, lcsn_total] = build_cells(
        [](const ProjectAggregate& pa) { return format_double(pa.lcs.norm_sum, 2); },
        [](const ConfigAggregate& aggregate) { return format_double(aggregate.lcs.norm_sum, 2); });
    std::string similarity_tables =
        format_table("Edit distance - median (small is better)", projects, labels, ed_cells,
                     ed_total) +
        "\n" +
        format_table("Longest common subsequence - median (large is better)", projects, labels,
                     lcs_cells, lcs_total) +
        "\n" +
        format_table("Edit similarity - normalized sum (large is better)", projects, labels,
                     es_cells, es_total) +
        "\n" +
        format_table("LCS similarity - normalized sum (large is better)", projects, labels,
                     lcsn_cells, lcsn_total);
    write_text_file(config.out_dir / "table_similarity.txt", similarity_tables);

    return result;
}

}  // namespace logbench
