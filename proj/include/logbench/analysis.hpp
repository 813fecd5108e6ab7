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

#include <array>
#include <map>
#include <string>
#include <vector>

#include "logbench/metrics.hpp"

namespace logbench {

// One evaluated (provider, prompt mode) pair.
struct ConfigKey {
    std::string provider_id;
    std::string mode;

    auto operator<=>(const ConfigKey&) const = default;
    std::string label() const { return provider_id + "/" + mode; }
};

// The four reporting variants of one similarity metric family.
struct MetricVariants {
    double median = 0.0;       // standard median
    double mean = 0.0;         // standard mean
    double norm_median = 0.0;  // median of the normalized similarity
    double norm_sum = 0.0;     // sum of the normalized similarity
};

struct ProjectAggregate {
    std::size_t row_count = 0;
    std::size_t pa_total = 0;
    MetricVariants ed;
    MetricVariants lcs;
};

struct ConfigAggregate {
    std::size_t row_count = 0;
    std::size_t pa_total = 0;
    MetricVariants ed;
    MetricVariants lcs;
    std::map<std::string, ProjectAggregate> projects;
};

using AggregateReport = std::map<ConfigKey, ConfigAggregate>;

// Medians over even counts use the midpoint convention; the normalized sum
// for the ED family is the sum of edit similarities, for the LCS family the
// sum of LCS similarities. Throws AnalysisError on an empty row list.
AggregateReport aggregate(const std::vector<ScoreRow>& rows);

// The nine reported metrics: PA plus four variants each for ED and LCS.
enum class MetricId {
    pa_total,
    ed_median,
    ed_mean,
    ed_norm_median,
    ed_norm_sum,
    lcs_median,
    lcs_mean,
    lcs_norm_median,
    lcs_norm_sum,
};

inline constexpr std::array<MetricId, 9> kAllMetrics = {
    MetricId::pa_total,       MetricId::ed_median,       MetricId::ed_mean,
    MetricId::ed_norm_median, MetricId::ed_norm_sum,     MetricId::lcs_median,
    MetricId::lcs_mean,       MetricId::lcs_norm_median, MetricId::lcs_norm_sum,
};

std::string to_string(MetricId metric);
MetricId metric_id_from_string(std::string_view s);

// True when smaller values are better (standard ED median/mean only).
bool ascending_is_better(MetricId metric);

double metric_value(const ConfigAggregate& aggregate, MetricId metric);

struct RankTable {
    MetricId metric = MetricId::pa_total;
    std::map<ConfigKey, int> ranks;  // 1 = best; competition ("1224") ties
    bool tie_policy_applied = false;
};

// Requires at least two configurations. Tied values share the minimum rank
// of their group.
RankTable rank(const AggregateReport& report, MetricId metric);

// Pearson coefficient over paired rank numbers. Requires identical key
// sets, at least two entries, and nonzero variance on both sides.
double pearson_rank_correlation(const std::map<ConfigKey, int>& ranks_a,
                                const std::map<ConfigKey, int>& ranks_b);

struct RankPairPoint {
    ConfigKey config;
    MetricId metric_a = MetricId::pa_total;
    MetricId metric_b = MetricId::pa_total;
    int rank_a = 0;
    int rank_b = 0;
};

struct Comparison {
    std::string id;
    double pooled_coefficient = 0.0;
    // per (metric_a, metric_b) variant pair
    std::map<std::pair<MetricId, MetricId>, double> per_variant;
    std::vector<RankPairPoint> points;      // scatter data
    std::vector<RankPairPoint> deviations;  // |rank_a - rank_b| >= 2
};

struct ComparisonReport {
    Comparison mean_vs_median;
    Comparison standard_vs_normalized;
    Comparison ed_vs_lcs;
};

// The three pairwise comparisons over the eight similarity rank tables
// (PA is not part of any pair). All nine tables must be present.
ComparisonReport comparison_report(const std::map<MetricId, RankTable>& rank_tables);

}  // namespace logbench
