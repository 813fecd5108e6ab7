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
#include <string>
#include <vector>

#include "logbench/metrics.hpp"

namespace logbench {

// Provenance embedded in every output file header: input hashes plus the
// provider settings that shaped the responses.
struct RunMetadata {
    std::string corpus_hash;
    std::string rules_hash;
    std::string prompt_hash;
    std::string provider_id;
    std::string model_name;
    std::string mode;
    double temperature = 0.2;
    int max_output_tokens = 512;
    int max_retries = 3;
    double echo_threshold = 0.9;
};

struct ScoreFile {
    RunMetadata meta;
    std::map<std::string, std::size_t> extraction_counts;  // class name -> count
    std::vector<std::string> missing_records;               // not in the cache
    std::vector<ScoreRow> rows;
};

// Delimited text, one ScoreRow per line, stable column order, `#`-prefixed
// metadata header. Byte-stable for identical inputs.
void write_score_file(const std::filesystem::path& path, const ScoreFile& file);

// Normalized columns are recomputed from the integer columns on load, so
// aggregation never depends on the file's decimal formatting.
ScoreFile read_score_file(const std::filesystem::path& path);

}  // namespace logbench
