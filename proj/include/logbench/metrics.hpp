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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace logbench {

struct LogRecord;

// Character-level Levenshtein distance with unit insert/delete/substitute
// costs. Either argument may be empty.
std::size_t edit_distance(std::string_view a, std::string_view b);

// Length of the longest (not necessarily contiguous) common character
// subsequence.
std::size_t longest_common_subsequence(std::string_view a, std::string_view b);

// True iff the whitespace-delimited token sequences are equal,
// case-sensitive. Callers are expected to pass canonicalized templates
// (placeholders `<*>`, whitespace collapsed).
bool parsing_accuracy(std::string_view t, std::string_view gt);

// Edit similarity: 1 - ED / max(len). Both strings empty counts as
// identical (similarity 1).
double edit_similarity(std::string_view t, std::string_view gt);

// LCS / len(gt). An empty ground truth scores 1 against an empty template
// and 0 otherwise; corpus validation keeps this case out of real runs.
double lcs_similarity(std::string_view t, std::string_view gt);

// Per-message metric values for one (record, configuration) pair.
struct ScoreRow {
    std::string record_id;
    std::string project;
    std::string provider_id;
    std::string mode;
    bool pa = false;
    std::size_t ed = 0;
    std::size_t lcs = 0;
    double es_norm = 0.0;
    double lcs_norm = 0.0;
    std::size_t len_t = 0;
    std::size_t len_gt = 0;
};

// Fills the metric fields of a ScoreRow from a template/ground-truth pair.
// Identity fields (record, project, provider, mode) are left empty.
ScoreRow score_pair(std::string_view t, std::string_view gt);

// Scores a record against an extracted template. An absent template scores
// as the empty string: pa=false, ed=len_gt, es_norm=0, lcs=0, lcs_norm=0.
ScoreRow score_record(const std::optional<std::string>& template_text, const LogRecord& record,
                      std::string_view provider_id, std::string_view mode);

}  // namespace logbench
