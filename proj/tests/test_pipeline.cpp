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

#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "logbench/csv.hpp"
#include "logbench/errors.hpp"
#include "logbench/hashing.hpp"
#include "logbench/pipeline.hpp"

using namespace logbench;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = LOGBENCH_DATA_DIR;
const fs::path kBench = fs::path(LOGBENCH_DATA_DIR) / "fixtures" / "replay_bench";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig bench_config(const fs::path& out, const std::string& provider, const std::string& mode) {
    RunConfig config;
    config.corpus_dir = kBench / "corpus";
    config.prompt_spec_path = kBench / "prompts" / (mode == "zero" ? "zero_shot.json" : "few_shot.json");
    config.provider_config_path = kBench / "providers" / (provider + "_" + mode + ".json");
    config.rules_path = kBench / "rules.json";
    config.out_dir = out;
    return config;
}

void stage_caches(const fs::path& out) {
    fs::create_directories(out);
    for (const auto& entry : fs::directory_iterator(kBench / "caches")) {
        fs::copy_file(entry.path(), out / entry.path().filename(),
                      fs::copy_options::overwrite_existing);
    }
}

void score_all(const fs::path& out) {
    for (const std::string provider : {"atlas", "birch", "cedar", "drift", "ember", "flint"}) {
        for (const std::string mode : {"zero", "few"}) {
            run_score(bench_config(out, provider, mode));
        }
    }
}

std::string file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("query against a replay endpoint fills the cache and is idempotent") {
    TempDir out("logbench_pipeline_query");
    // Point the provider at the bundled replay store with an absolute path.
    fs::path provider_file = out.path / "provider.json";
    {
        nlohmann::json doc{
            {"provider_id", "atlas"},
            {"endpoint", "replay:" + (kBench / "caches" / "responses_atlas_few.jsonl").string()},
            {"model_name", "atlas-7b"},
            {"temperature", 0.2},
        };
        std::ofstream(provider_file) << doc.dump();
    }
    RunConfig config = bench_config(out.path / "run", "atlas", "few");
    config.provider_config_path = provider_file;

    QuerySummary summary = run_query(config);
    CHECK(summary.prompt_count == 50);
    CHECK(summary.status_counts.at("ok") == 50);

    // Re-invocation is a no-op on a complete cache: the replay store could
    // vanish and the cache would still answer.
    QuerySummary again = run_query(config);
    CHECK(again.prompt_count == 50);
    CHECK(again.status_counts.at("ok") == 50);

    // The cache now doubles as scoring input.
    ScoreFile scores = run_score(config);
    CHECK(scores.rows.size() == 50);
    CHECK(scores.missing_records.empty());
}

TEST_CASE("score and report are deterministic byte for byte") {
    TempDir a("logbench_pipeline_det_a");
    TempDir b("logbench_pipeline_det_b");
    for (const auto* dir : {&a, &b}) {
        stage_caches(dir->path);
        score_all(dir->path);
        RunConfig config;
        config.out_dir = dir->path;
        run_report(config);
    }
    for (const auto& entry : fs::directory_iterator(a.path)) {
        std::string name = entry.path().filename().string();
        CAPTURE(name);
        REQUIRE(fs::exists(b.path / name));
        REQUIRE(file_bytes(entry.path()) == file_bytes(b.path / name));
    }
}

TEST_CASE("the replay bench report has the published shape") {
    TempDir out("logbench_pipeline_shape");
    stage_caches(out.path);
    score_all(out.path);
    RunConfig config;
    config.out_dir = out.path;
    ReportResult result = run_report(config);

    CHECK(result.aggregates.size() == 12);
    CHECK(result.rank_tables.size() == 9);
    REQUIRE(result.comparisons.has_value());

    // Every rank table covers ranks 1..12 under competition ranking.
    for (const auto& [metric, table] : result.rank_tables) {
        REQUIRE(table.ranks.size() == 12);
        int best = 99;
        for (const auto& [key, rank_value] : table.ranks) best = std::min(best, rank_value);
        CHECK(best == 1);
    }

    CHECK(fs::exists(out.path / "report.json"));
    CHECK(fs::exists(out.path / "table_parsing_accuracy.txt"));
    CHECK(fs::exists(out.path / "table_similarity.txt"));

    nlohmann::json report = nlohmann::json::parse(file_bytes(out.path / "report.json"));
    CHECK(report.at("rank_tables").size() == 9);
    CHECK(report.at("aggregates").size() == 12);
    CHECK(report.at("correlations").size() == 3);
}

TEST_CASE("a single configuration reports trivial ranks and no correlations") {
    TempDir out("logbench_pipeline_single");
    stage_caches(out.path);
    run_score(bench_config(out.path, "atlas", "few"));
    // Remove the other caches so only one score file exists.
    RunConfig config;
    config.out_dir = out.path;
    ReportResult result = run_report(config);
    CHECK(result.aggregates.size() == 1);
    CHECK(result.rank_tables.size() == 9);
    for (const auto& [metric, table] : result.rank_tables) {
        REQUIRE(table.ranks.size() == 1);
        CHECK(table.ranks.begin()->second == 1);
    }
    CHECK_FALSE(result.comparisons.has_value());
    nlohmann::json report = nlohmann::json::parse(file_bytes(out.path / "report.json"));
    CHECK_FALSE(report.contains("correlations"));
}

TEST_CASE("mixed corpus hashes are refused") {
    TempDir out("logbench_pipeline_mixed");
    stage_caches(out.path);
    run_score(bench_config(out.path, "atlas", "few"));

    // Doctor a copy of the score file to claim another corpus.
    fs::path original = score_path(out.path, "atlas", "few");
    std::string content = file_bytes(original);
    std::size_t pos = content.find("# corpus_hash=");
    REQUIRE(pos != std::string::npos);
    content.replace(pos + 14, 8, "deadbeef");
    std::ofstream(out.path / "scores_other_few.csv", std::ios::binary) << content;

    RunConfig config;
    config.out_dir = out.path;
    CHECK_THROWS_WITH_AS(run_report(config), doctest::Contains("corpus"), ValidationError);
}

TEST_CASE("scoring an absent cache or empty cache fails cleanly") {
    TempDir out("logbench_pipeline_nocache");
    RunConfig config = bench_config(out.path, "atlas", "few");
    CHECK_THROWS_AS(run_score(config), ConfigError);

    fs::create_directories(out.path);
    std::ofstream(out.path / "responses_atlas_few.jsonl").close();
    CHECK_THROWS_AS(run_score(config), ConfigError);
}

TEST_CASE("records missing from the cache are listed and the rest scored") {
    TempDir out("logbench_pipeline_missing");
    stage_caches(out.path);
    // Drop the first three lines of one cache.
    fs::path cache = out.path / "responses_atlas_few.jsonl";
    std::string content = file_bytes(cache);
    std::size_t cut = 0;
    for (int i = 0; i < 3; ++i) cut = content.find('\n', cut) + 1;
    std::ofstream(cache, std::ios::binary) << content.substr(cut);

    ScoreFile scores = run_score(bench_config(out.path, "atlas", "few"));
    CHECK(scores.rows.size() == 47);
    REQUIRE(scores.missing_records.size() == 3);
    CHECK(scores.missing_records[0] == "AuthSvc#1");

    // The header round-trips the missing list.
    ScoreFile reread = read_score_file(score_path(out.path, "atlas", "few"));
    CHECK(reread.missing_records == scores.missing_records);
    CHECK(reread.rows.size() == 47);
}

TEST_CASE("echoed responses score as absent templates") {
    TempDir out("logbench_pipeline_echo");
    stage_caches(out.path);
    ScoreFile scores = run_score(bench_config(out.path, "ember", "zero"));
    std::size_t echo_count = scores.extraction_counts.at("echoed_prompt");
    REQUIRE(echo_count > 0);
    std::size_t zero_len_rows = 0;
    for (const auto& row : scores.rows) {
        if (row.len_t == 0) ++zero_len_rows;
    }
    // echoes and empty responses both score as the empty template
    CHECK(zero_len_rows >= echo_count);
}

TEST_CASE("review files round-trip through the score stage") {
    TempDir out("logbench_pipeline_reviews");
    stage_caches(out.path);
    RunConfig config = bench_config(out.path, "flint", "zero");
    ScoreFile first = run_score(config);

    fs::path review = out.path / "review_flint_zero.csv";
    REQUIRE(fs::exists(review));

    // Replace every proposal with the ground truth and re-score: every
    // reviewed row must now be exactly right.
    Corpus corpus = load_corpus(config.corpus_dir);
    std::map<std::string, std::string> gt;
    for (const auto& record : corpus.records) gt[record.record_id] = record.ground_truth;

    csv::Table table = [&] {
        std::ifstream in(review, std::ios::binary);
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return csv::parse(content, "review");
    }();
    fs::path edited = out.path / "edited_reviews.csv";
    {
        std::ofstream outf(edited, std::ios::binary);
        outf << csv::format_row({"record_id", "extraction_class", "proposed_template", "excerpt"});
        for (const auto& row : table.rows) {
            outf << csv::format_row({row[0], row[1], gt.at(row[0]), ""});
        }
    }

    config.reviews_path = edited;
    ScoreFile second = run_score(config);
    std::map<std::string, bool> reviewed;
    for (const auto& row : table.rows) reviewed[row[0]] = true;
    for (const auto& row : second.rows) {
        if (reviewed.count(row.record_id)) {
            CAPTURE(row.record_id);
            CHECK(row.pa);
        }
    }
    CHECK(second.extraction_counts == first.extraction_counts);
}
