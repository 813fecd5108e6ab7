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
#include <string_view>
#include <vector>

namespace logbench {

// One raw log message paired with its ground-truth template.
struct LogRecord {
    std::string record_id;
    std::string project;
    std::string content;
    std::string ground_truth;

    bool operator==(const LogRecord&) const = default;
};

struct Corpus {
    std::vector<std::string> projects;  // lexicographic file order
    std::vector<LogRecord> records;     // file order within project order
    std::string source_path;
    std::string variant;

    std::map<std::string, std::size_t> project_counts() const;

    bool operator==(const Corpus& other) const {
        return projects == other.projects && records == other.records;
    }
};

// project -> expected record count
using Manifest = std::map<std::string, std::size_t>;

// Returns human-readable violations; empty iff the template is non-empty
// and every angle-bracketed span is exactly the canonical `<*>`.
std::vector<std::string> validate_ground_truth(std::string_view tmpl);

// Reads `project=count` lines; '#' starts a comment.
Manifest load_manifest(const std::filesystem::path& path);

// Loads a directory of `<Project>.csv` files (columns `Content`,
// `EventTemplate`, optional `LineId`). Project files are visited in
// lexicographic order so record order is deterministic. When a manifest is
// given, per-project counts must match exactly.
Corpus load_corpus(const std::filesystem::path& dir, const std::optional<Manifest>& manifest = std::nullopt);

// Writes one `<Project>.csv` per project in the on-disk format accepted by
// load_corpus. Reloading yields an equal corpus.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Content hash over the canonical record serialization; invariant under
// CSV quoting details, sensitive to any record field or ordering change.
std::string corpus_hash(const Corpus& corpus);

}  // namespace logbench
