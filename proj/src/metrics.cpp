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

#include "logbench/metrics.hpp"

#include <algorithm>
#include <vector>

#include "logbench/corpus.hpp"
#include "logbench/text.hpp"

namespace logbench {

std::size_t edit_distance(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (n == 0) return m;

    std::vector<std::size_t> prev(n + 1);
    std::vector<std::size_t> cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

std::size_t longest_common_subsequence(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    const std::size_t m = a.size();
    const std::size_t n = b.size();
    if (n == 0) return 0;

    std::vector<std::size_t> prev(n + 1, 0);
    std::vector<std::size_t> cur(n + 1, 0);
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            if (a[i - 1] == b[j - 1]) {
                cur[j] = prev[j - 1] + 1;
            } else {
                cur[j] = std::max(prev[j], cur[j - 1]);
            }
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

bool parsing_accuracy(std::string_view t, std::string_view gt) {
    auto a = split_tokens(t);
    auto b = split_tokens(gt);
    return a == b;
}

double edit_similarity(std::string_view t, std::string_view gt) {
    std::size_t longest = std::max(t.size(), gt.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(edit_distance(t, gt)) / static_cast<double>(longest);
}

double lcs_similarity(std::string_view t, std::string_view gt) {
    if (gt.empty()) return t.empty() ? 1.0 : 0.0;
    return static_cast<double>(longest_common_subsequence(t, gt)) / static_cast<double>(gt.size());
}

ScoreRow score_pair(std::string_view t, std::string_view gt) {
    ScoreRow row;
    row.len_t = t.size();
    row.len_gt = gt.size();
    row.pa = parsing_accuracy(t, gt);
    row.ed = edit_distance(t, gt);
    row.lcs = longest_common_subsequence(t, gt);
    row.es_norm = edit_similarity(t, gt);
    row.lcs_norm = lcs_similarity(t, gt);
    return row;
}

ScoreRow score_record(const std::optional<std::string>& template_text, const LogRecord& record,
                      std::string_view provider_id, std::string_view mode) {
    ScoreRow row = score_pair(template_text ? std::string_view(*template_text) : std::string_view(),
                              record.ground_truth);
    if (!template_text) row.pa = false;
    row.record_id = record.record_id;
    row.project = record.project;
    row.provider_id = std::string(provider_id);
    row.mode = std::string(mode);
    return row;
}

}  // namespace logbench
