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

// Regenerates the bundled fixtures: the 50-message mini corpus, the
// Table-1-sized corrected corpus, and the deterministic replay caches for
// the 12 benchmark configurations. Everything is seeded from stable string
// hashes, so reruns reproduce the bundle byte for byte.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "logbench/corpus.hpp"
#include "logbench/errors.hpp"
#include "logbench/llm_client.hpp"
#include "logbench/prompting.hpp"

namespace fs = std::filesystem;
using namespace logbench;

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint32_t pick(std::mt19937& rng, std::uint32_t bound) { return rng() % bound; }

// --- mini corpus -----------------------------------------------------------

struct Pair {
    const char* content;
    const char* ground_truth;
};

const std::vector<std::pair<std::string, std::vector<Pair>>> kMiniCorpus = {
    {"AuthSvc",
     {
         {"Accepted password for user u4821 from 10.31.7.2 port 50411",
          "Accepted password for user <*> from <*> port <*>"},
         {"Failed login attempt for user guest after 3 tries",
          "Failed login attempt for user <*> after <*> tries"},
         {"Session 9c1f4 opened for uid 1001", "Session <*> opened for uid <*>"},
         {"Session 9c1f4 closed after 384 seconds", "Session <*> closed after <*> seconds"},
         {"Token refresh for client app-7 succeeded in 42 ms",
          "Token refresh for client <*> succeeded in <*> ms"},
         {"Lockout triggered for user u990 until 2024-03-09T13:00:00",
          "Lockout triggered for user <*> until <*>"},
         {"queue: default", "queue: default"},
         {"Password changed for uid 3377", "Password changed for uid <*>"},
         {"Two factor code sent to device dev-88217", "Two factor code sent to device <*>"},
         {"Revoked 12 stale sessions for tenant acme-corp",
          "Revoked <*> stale sessions for tenant <*>"},
     }},
    {"CacheDB",
     {
         {"Evicted 240 entries from shard 7 in 12 ms", "Evicted <*> entries from shard <*> in <*> ms"},
         {"Cache hit ratio 0.93 over 10000 lookups", "Cache hit ratio <*> over <*> lookups"},
         {"Compaction of level 2 finished, freed 18 MB",
          "Compaction of level <*> finished, freed <*> MB"},
         {"Replica lag for node cache-3 is 847 ms", "Replica lag for node <*> is <*> ms"},
         {"Snapshot snap-2210 written to /var/lib/cachedb/snap-2210.bin",
          "Snapshot <*> written to <*>"},
         {"Rejected write: key k_55f exceeds limit 4096 bytes",
          "Rejected write: key <*> exceeds limit <*> bytes"},
         {"Warmup loaded 5000 keys in 2.31 seconds", "Warmup loaded <*> keys in <*> seconds"},
         {"Node cache-9 joined ring with weight 100", "Node <*> joined ring with weight <*>"},
         {"TTL sweep removed 73 expired entries", "TTL sweep removed <*> expired entries"},
         {"Persistence disabled by operator", "Persistence disabled by operator"},
     }},
    {"NetGate",
     {
         {"Dropped packet from 192.168.4.77 to 10.0.0.12 proto tcp",
          "Dropped packet from <*> to <*> proto <*>"},
         {"Interface eth2 link up at 1000 Mbps", "Interface <*> link up at <*> Mbps"},
         {"Rate limit applied to 172.16.3.9 for 60 seconds",
          "Rate limit applied to <*> for <*> seconds"},
         {"DNS lookup for api.example.com took 118 ms", "DNS lookup for <*> took <*> ms"},
         {"Route table reload completed with 1287 entries",
          "Route table reload completed with <*> entries"},
         {"TLS handshake with peer 203.0.113.4 failed: certificate expired",
          "TLS handshake with peer <*> failed: certificate expired"},
         {"Forwarded 10240 bytes for flow f-3321", "Forwarded <*> bytes for flow <*>"},
         {"ARP cache flushed on request", "ARP cache flushed on request"},
         {"Firewall rule 88 matched 302 times", "Firewall rule <*> matched <*> times"},
         {"Tunnel tun0 renegotiated keys after 3600 seconds",
          "Tunnel <*> renegotiated keys after <*> seconds"},
     }},
    {"SchedCore",
     {
         {"Job j-99810 submitted to partition batch", "Job <*> submitted to partition <*>"},
         {"Job j-99811 started on node compute-041", "Job <*> started on node <*>"},
         {"Job j-99812 finished with exit code 0 in 95 seconds",
          "Job <*> finished with exit code <*> in <*> seconds"},
         {"Preempted job j-55001 for higher priority job j-55002",
          "Preempted job <*> for higher priority job <*>"},
         {"Backfill window recalculated in 4 ms", "Backfill window recalculated in <*> ms"},
         {"Node compute-077 drained for maintenance", "Node <*> drained for maintenance"},
         {"Queue depth reached 412 pending jobs", "Queue depth reached <*> pending jobs"},
         {"Heartbeat missed for node compute-102, marking offline",
          "Heartbeat missed for node <*>, marking offline"},
         {"Reservation res-17 expired", "Reservation <*> expired"},
         {"Scheduler cycle took 27 ms for 350 jobs", "Scheduler cycle took <*> ms for <*> jobs"},
     }},
    {"StoreFS",
     {
         {"Deleting block blk-4417 from volume vol-2", "Deleting block <*> from volume <*>"},
         {"Checksum mismatch for object obj-8812, retrying read",
          "Checksum mismatch for object <*>, retrying read"},
         {"Garbage collector reclaimed 512 MB in 8.4 seconds",
          "Garbage collector reclaimed <*> MB in <*> seconds"},
         {"Mounted volume vol-9 read-only due to 17 errors",
          "Mounted volume <*> read-only due to <*> errors"},
         {"Replication of blk-7733 to 3 peers completed",
          "Replication of <*> to <*> peers completed"},
         {"Disk /dev/sdb usage at 91 percent", "Disk <*> usage at <*> percent"},
         {"Opened 128 file handles for client c-771", "Opened <*> file handles for client <*>"},
         {"Quota exceeded for tenant t-55: 1024 of 1000 MB",
          "Quota exceeded for tenant <*>: <*> of <*> MB"},
         {"Rebalance moved 44 blocks between 6 volumes",
          "Rebalance moved <*> blocks between <*> volumes"},
         {"Inode table resized to 200000 entries", "Inode table resized to <*> entries"},
     }},
};

Corpus build_mini_corpus() {
    Corpus corpus;
    for (const auto& [project, pairs] : kMiniCorpus) {
        corpus.projects.push_back(project);
        std::size_t row = 0;
        for (const auto& pair : pairs) {
            ++row;
            corpus.records.push_back(
                {project + "#" + std::to_string(row), project, pair.content, pair.ground_truth});
        }
    }
    return corpus;
}

// --- corrected-scale corpus (census counts) ----------------------------------

const std::vector<std::pair<std::string, std::size_t>> kCorrectedCounts = {
    {"HDFS", 14},    {"Hadoop", 114},     {"Spark", 36},   {"Zookeeper", 50},
    {"OpenStack", 43}, {"BGL", 120},      {"HPC", 46},     {"Thunderbird", 149},
    {"Windows", 50}, {"Linux", 118},      {"Mac", 341},    {"Android", 158},
    {"HealthApp", 75}, {"Apache", 6},     {"OpenSSH", 26}, {"Proxifier", 8},
};

Corpus build_corrected_corpus() {
    struct Shape {
        const char* before;  // text before value A
        const char* mid;     // between A and B
        const char* after;   // after B
    };
    const std::vector<Shape> shapes = {
        {"Opened connection ", " to peer ", ""},
        {"Task finished with id ", " in ", " ms"},
        {"Wrote ", " bytes to segment ", ""},
        {"Retrying request ", " after ", " errors"},
        {"Memory usage ", " MB on worker ", ""},
        {"Thread pool resized from ", " to ", ""},
        {"Dropped ", " events for stream ", ""},
        {"Granted role ", " to user ", ""},
        {"Heartbeat from node ", " delayed ", " ms"},
        {"Cache entry ", " refreshed at offset ", ""},
    };

    Corpus corpus;
    std::size_t project_index = 0;
    for (const auto& [project, count] : kCorrectedCounts) {
        corpus.projects.push_back(project);
        for (std::size_t i = 1; i <= count; ++i) {
            const Shape& shape = shapes[i % shapes.size()];
            // A per-row static marker keeps every template unique.
            std::string marker = "p" + std::to_string(i);
            std::string value_a = std::to_string(1000 + project_index * 37 + i * 7);
            std::string value_b = std::to_string((project_index * 11 + i * 3) % 97);
            LogRecord record;
            record.project = project;
            record.record_id = project + "#" + std::to_string(i);
            record.content =
                marker + " " + shape.before + value_a + shape.mid + value_b + shape.after;
            record.ground_truth =
                marker + " " + std::string(shape.before) + "<*>" + shape.mid + "<*>" + shape.after;
            corpus.records.push_back(std::move(record));
        }
        ++project_index;
    }
    std::sort(corpus.projects.begin(), corpus.projects.end());
    return corpus;
}

// --- replay bench ------------------------------------------------------------

enum class Kind {
    exact,
    format_dev,
    verbose,
    header_kept,
    wrong,
    truncated,
    untagged_ok,
    untagged_bad,
    single_ok,
    single_bad,
    multi,
    echo,
    empty,
};

struct Profile {
    std::string provider_id;
    std::string mode;  // "zero" or "few"
    // weights per Kind, in enum order; they sum to 100
    std::vector<int> weights;
};

// Quality ladder: atlas/few and cedar/few solve more than half of the
// messages (tied median ED of 0); birch/few sits just below half and
// carries the repeated-placeholder outlier.
const std::vector<Profile> kProfiles = {
    //                              ex  fd  vb  hd  wr  tr  uo  ub  so  sb  mu  ec  em
    {"atlas", "few",               {62, 10,  8,  6,  8,  6,  0,  0,  0,  0,  0,  0,  0}},
    {"atlas", "zero",              {20,  8,  2, 10, 30, 12,  2, 16,  0,  0,  0,  0,  0}},
    {"birch", "few",               {26, 10,  8, 10, 26, 10,  0,  0,  0,  0, 10,  0,  0}},
    {"birch", "zero",              {12,  8,  2,  8, 30, 12,  4, 16,  0,  4,  0,  4,  0}},
    {"cedar", "few",               {40, 12,  6,  8, 16,  6,  0,  0,  6,  0,  0,  0,  0}},
    {"cedar", "zero",              {16, 14,  4,  6, 28, 10,  6, 12,  0,  4,  0,  0,  0}},
    {"drift", "few",               {24, 10,  4, 10, 24, 10,  0, 10,  0,  0,  8,  0,  0}},
    {"drift", "zero",              {12, 10,  2,  6, 26,  8, 10, 16,  0,  0,  0, 10,  0}},
    {"ember", "few",               {12,  0,  2,  4, 20,  8,  0, 10,  0,  8,  0, 24, 12}},
    {"ember", "zero",              { 8,  4,  2,  4, 22,  4,  4, 18,  0,  4,  0, 30,  0}},
    {"flint", "few",               { 6,  4,  2,  4, 30, 10,  0, 18,  0, 12,  6,  4,  4}},
    {"flint", "zero",              { 4,  4,  0,  4, 34,  6,  0, 26,  0, 10,  2,  6,  4}},
};

const std::vector<std::string> kWrongValues = {"4711", "x09f", "10.0.0.99", "frobnicate-9000"};

const std::vector<std::string> kFormatPatterns = {"{*}",   "{{v}}", "${val}", "[value]",
                                                  "<id>",  "$VAR",  "%s",     "<<v>>"};

const std::vector<std::string> kGarbageLines = {
    "I cannot find a template in this log line.",
    "The message appears to be free text without variables.",
    "No dynamic variables detected; nothing to extract.",
    "Sorry, I need more context to parse this message.",
};

std::string replace_placeholders(const std::string& ground_truth, const std::string& with) {
    std::string out;
    std::size_t pos = 0;
    while (pos < ground_truth.size()) {
        std::size_t hit = ground_truth.find("<*>", pos);
        if (hit == std::string::npos) {
            out += ground_truth.substr(pos);
            break;
        }
        out += ground_truth.substr(pos, hit - pos);
        out += with;
        pos = hit + 3;
    }
    return out;
}

Kind sample_kind(const Profile& profile, std::mt19937& rng) {
    int roll = static_cast<int>(pick(rng, 100));
    int cumulative = 0;
    for (std::size_t k = 0; k < profile.weights.size(); ++k) {
        cumulative += profile.weights[k];
        if (roll < cumulative) return static_cast<Kind>(k);
    }
    return Kind::wrong;
}

std::string synthesize_response(Kind kind, const LogRecord& record, const std::string& prompt_text,
                                std::mt19937& rng) {
    const std::string& gt = record.ground_truth;
    auto wrong_template = [&] {
        return replace_placeholders(gt, kWrongValues[pick(rng, kWrongValues.size())]);
    };
    switch (kind) {
        case Kind::exact:
            return "<TPL>" + gt + "</TPL>";
        case Kind::format_dev:
            return "<TPL>" + replace_placeholders(gt, kFormatPatterns[pick(rng, kFormatPatterns.size())]) +
                   "</TPL>";
        case Kind::verbose:
            return "Sure. The extracted template is:\n<TPL>" + gt +
                   "</TPL>\nEach placeholder stands for a dynamic value.";
        case Kind::header_kept:
            return "<TPL>2024-03-09 12:00:0" + std::to_string(pick(rng, 10)) + " " + gt + "</TPL>";
        case Kind::wrong:
            return "<TPL>" + wrong_template() + "</TPL>";
        case Kind::truncated: {
            std::size_t cut = gt.size() * (40 + pick(rng, 30)) / 100;
            return "<TPL>" + gt.substr(0, std::max<std::size_t>(cut, 1)) + "</TPL>";
        }
        case Kind::untagged_ok:
            return gt;
        case Kind::untagged_bad:
            return kGarbageLines[pick(rng, kGarbageLines.size())];
        case Kind::single_ok:
            return "<TPL>" + gt;
        case Kind::single_bad:
            return "<TPL>" + wrong_template();
        case Kind::multi:
            return "<TPL>" + wrong_template() + "</TPL> or <TPL>" + gt + "</TPL>";
        case Kind::echo:
            return prompt_text;
        case Kind::empty:
            return "";
    }
    return "";
}

std::string outlier_response() {
    std::string body = "attempt_";
    for (int i = 0; i < 1758; ++i) body += "<*>";
    return "<TPL>" + body + "</TPL>";
}

void write_provider_file(const fs::path& path, const std::string& provider_id,
                         const std::string& mode) {
    nlohmann::json doc{
        {"provider_id", provider_id},
        {"endpoint", "replay:caches/responses_" + provider_id + "_" + mode + ".jsonl"},
        {"model_name", provider_id + "-7b"},
        {"temperature", 0.2},
        {"max_output_tokens", 512},
        {"max_retries", 3},
        {"max_concurrency", 4},
    };
    std::ofstream out(path, std::ios::binary);
    out << doc.dump(2) << '\n';
}

void generate_replay_bench(const fs::path& data_dir) {
    fs::path bench = data_dir / "fixtures" / "replay_bench";
    fs::create_directories(bench / "caches");
    fs::create_directories(bench / "prompts");
    fs::create_directories(bench / "providers");

    Corpus corpus = build_mini_corpus();
    save_corpus(corpus, bench / "corpus");

    // Frozen copies keep the bundle hermetic if the shipped defaults evolve.
    fs::copy_file(data_dir / "prompts" / "zero_shot.json", bench / "prompts" / "zero_shot.json",
                  fs::copy_options::overwrite_existing);
    fs::copy_file(data_dir / "prompts" / "few_shot.json", bench / "prompts" / "few_shot.json",
                  fs::copy_options::overwrite_existing);
    fs::copy_file(data_dir / "rules" / "default_rules.json", bench / "rules.json",
                  fs::copy_options::overwrite_existing);

    PromptSpec zero_spec = load_prompt_spec(bench / "prompts" / "zero_shot.json");
    PromptSpec few_spec = load_prompt_spec(bench / "prompts" / "few_shot.json");

    // The outlier lands on the record with the shortest ground truth.
    std::string outlier_record;
    std::size_t shortest = SIZE_MAX;
    for (const auto& record : corpus.records) {
        if (record.ground_truth.size() < shortest) {
            shortest = record.ground_truth.size();
            outlier_record = record.record_id;
        }
    }

    for (const auto& profile : kProfiles) {
        const PromptSpec& spec = profile.mode == "zero" ? zero_spec : few_spec;
        std::string model_name = profile.provider_id + "-7b";

        fs::path cache_file =
            bench / "caches" / ("responses_" + profile.provider_id + "_" + profile.mode + ".jsonl");
        std::ofstream out(cache_file, std::ios::binary);
        if (!out) throw IoError("cannot write " + cache_file.string());

        for (const auto& record : corpus.records) {
            RenderedPrompt prompt = render_prompt(spec, record);
            std::mt19937 rng(static_cast<std::uint32_t>(
                fnv1a(profile.provider_id + "|" + profile.mode + "|" + record.record_id)));
            Kind kind = sample_kind(profile, rng);
            std::string raw_text = synthesize_response(kind, record, prompt.text, rng);
            if (profile.provider_id == "birch" && profile.mode == "few" &&
                record.record_id == outlier_record) {
                raw_text = outlier_response();
            }

            ModelResponse response;
            response.record_id = record.record_id;
            response.provider_id = profile.provider_id;
            response.mode = profile.mode;
            response.raw_text = raw_text;
            response.status = raw_text.empty() ? ResponseStatus::empty : ResponseStatus::ok;
            response.attempt_count = 1;
            response.latency = std::chrono::milliseconds(0);
            response.request_fingerprint = request_fingerprint(prompt.text, model_name, 0.2);
            out << to_json_line(response) << '\n';
        }

        write_provider_file(bench / "providers" / (profile.provider_id + "_" + profile.mode + ".json"),
                            profile.provider_id, profile.mode);
    }
    std::cout << "replay bench written to " << bench.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regenerate the bundled logbench fixtures"};
    std::string data_dir = "data";
    app.add_option("--data-dir", data_dir, "Repository data directory (default: data)");
    CLI11_PARSE(app, argc, argv);

    try {
        fs::path data(data_dir);

        Corpus corrected = build_corrected_corpus();
        save_corpus(corrected, data / "fixtures" / "corrected_corpus");
        {
            std::ofstream manifest(data / "fixtures" / "corrected_corpus_manifest.txt",
                                   std::ios::binary);
            manifest << "# Expected per-project template counts (corrected variant)\n";
            std::vector<std::pair<std::string, std::size_t>> sorted(kCorrectedCounts.begin(),
                                                                    kCorrectedCounts.end());
            std::sort(sorted.begin(), sorted.end());
            for (const auto& [project, count] : sorted) {
                manifest << project << "=" << count << '\n';
            }
        }
        std::cout << "corrected corpus written (" << corrected.records.size() << " records)\n";

        generate_replay_bench(data);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
