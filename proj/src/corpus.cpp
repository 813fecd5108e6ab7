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

#include "logbench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "logbench/csv.hpp"
#include "logbench/errors.hpp"
#include "logbench/hashing.hpp"
#include "logbench/text.hpp"

namespace logbench {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::map<std::string, std::size_t> Corpus::project_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& project : projects) counts[project] = 0;
    for (const auto& record : records) counts[record.project]++;
    return counts;
}

std::vector<std::string> validate_ground_truth(std::string_view tmpl) {
    std::vector<std::string> violations;
    if (tmpl.empty()) {
        violations.push_back("empty template");
        return violations;
    }
    std::size_t pos = 0;
    while ((pos = tmpl.find('<', pos)) != std::string_view::npos) {
        std::size_t close = tmpl.find('>', pos + 1);
        if (close == std::string_view::npos) break;  // literal '<', no span
        std::string_view span = tmpl.substr(pos, close - pos + 1);
        if (span != "<*>") {
            violations.push_back("non-canonical placeholder at offset " + std::to_string(pos));
        }
        pos = close + 1;
    }
    return violations;
}

Manifest load_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    Manifest manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = trim(line);
        if (sv.empty() || sv.front() == '#') continue;
        std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected `project=count`");
        }
        std::string project(trim(sv.substr(0, eq)));
        std::string count_text(trim(sv.substr(eq + 1)));
        if (project.empty() || count_text.empty() ||
            count_text.find_first_not_of("0123456789") != std::string::npos) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected `project=count`");
        }
        if (!manifest.emplace(project, std::stoul(count_text)).second) {
            throw FormatError(path.string() + ": duplicate project " + project);
        }
    }
    return manifest;
}

Corpus load_corpus(const fs::path& dir, const std::optional<Manifest>& manifest) {
    if (!fs::is_directory(dir)) {
        throw FormatError("corpus path is not a directory: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    if (files.empty()) {
        throw FormatError("no project files found in " + dir.string());
    }
    std::sort(files.begin(), files.end());

    Corpus corpus;
    corpus.source_path = dir.string();
    std::set<std::string> seen_ids;

    for (const auto& file : files) {
        std::string project = file.stem().string();
        corpus.projects.push_back(project);

        csv::Table table = csv::parse(read_file(file), file.string());
        int content_col = table.column("Content");
        int template_col = table.column("EventTemplate");
        int id_col = table.column("LineId");
        if (content_col < 0) {
            throw FormatError(file.string() + ": missing required column Content");
        }
        if (template_col < 0) {
            throw FormatError(file.string() + ": missing required column EventTemplate");
        }

        std::size_t row_no = 0;
        for (const auto& row : table.rows) {
            ++row_no;
            auto field = [&](int col) -> std::string {
                if (col < 0 || static_cast<std::size_t>(col) >= row.size()) return {};
                return row[static_cast<std::size_t>(col)];
            };
            LogRecord record;
            record.project = project;
            record.content = field(content_col);
            record.ground_truth = field(template_col);
            record.record_id = field(id_col);
            if (record.record_id.empty()) {
                record.record_id = project + "#" + std::to_string(row_no);
            }
            if (record.content.empty()) {
                throw ValidationError(file.string() + ": empty message content for record " +
                                      record.record_id);
            }
            auto violations = validate_ground_truth(record.ground_truth);
            if (!violations.empty()) {
                throw ValidationError(file.string() + ": invalid ground truth for record " +
                                      record.record_id + ": " + violations.front());
            }
            if (!seen_ids.insert(record.record_id).second) {
                throw ValidationError(file.string() + ": duplicate record_id " + record.record_id);
            }
            corpus.records.push_back(std::move(record));
        }
    }

    if (manifest) {
        auto counts = corpus.project_counts();
        std::string diff;
        for (const auto& [project, expected] : *manifest) {
            std::size_t actual = counts.count(project) ? counts.at(project) : 0;
            if (actual != expected) {
                diff += "\n  " + project + ": expected " + std::to_string(expected) + ", actual " +
                        std::to_string(actual);
            }
        }
        for (const auto& [project, actual] : counts) {
            if (!manifest->count(project)) {
                diff += "\n  " + project + ": expected 0 (not in manifest), actual " +
                        std::to_string(actual);
            }
        }
        if (!diff.empty()) {
            throw ValidationError("corpus does not match manifest:" + diff);
        }
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& project : corpus.projects) {
        std::ofstream out(dir / (project + ".csv"), std::ios::binary);
        if (!out) throw IoError("cannot write corpus file for project " + project);
        out << csv::format_row({"LineId", "Content", "EventTemplate"});
        for (const auto& record : corpus.records) {
            if (record.project != project) continue;
            out << csv::format_row({record.record_id, record.content, record.ground_truth});
        }
    }
}

std::string corpus_hash(const Corpus& corpus) {
    std::string canonical;
    for (const auto& record : corpus.records) {
        for (const std::string* part :
             {&record.project, &record.record_id, &record.content, &record.ground_truth}) {
            canonical += std::to_string(part->size());
            canonical.push_back(':');
            canonical += *part;
            canonical.push_back('\n');
        }
    }
    return sha256_hex(canonical);
}

}  // namespace logbench
