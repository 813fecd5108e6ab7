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

#include "logbench/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "logbench/errors.hpp"

namespace logbench {

namespace {

double median_of_sorted(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

struct VariantAccumulator {
    std::vector<double> standard;
    std::vector<double> normalized;
    double standard_sum = 0.0;
    double normalized_sum = 0.0;

    void add(double standard_value, double normalized_value) {
        standard.push_back(standard_value);
        normalized.push_back(normalized_value);
        standard_sum += standard_value;
        normalized_sum += normalized_value;
    }

    MetricVariants finish() {
        MetricVariants variants;
        variants.mean = standard.empty() ? 0.0 : standard_sum / static_cast<double>(standard.size());
        variants.norm_sum = normalized_sum;
        variants.median = median_of_sorted(standard);
        variants.norm_median = median_of_sorted(normalized);
        return variants;
    }
};

struct GroupAccumulator {
    std::size_t row_count = 0;
    std::size_t pa_total = 0;
    VariantAccumulator ed;
    VariantAccumulator lcs;

    void add(const ScoreRow& row) {
        ++row_count;
        if (row.pa) ++pa_total;
        ed.add(static_cast<double>(row.ed), row.es_norm);
        lcs.add(static_cast<double>(row.lcs), row.lcs_norm);
    }
};

}  // namespace

AggregateReport aggregate(const std::vector<ScoreRow>& rows) {
    if (rows.empty()) throw AnalysisError("cannot aggregate an empty score list");

    std::map<ConfigKey, GroupAccumulator> totals;
    std::map<ConfigKey, std::map<std::string, GroupAccumulator>> per_project;
    for (const auto& row : rows) {
        ConfigKey key{row.provider_id, row.mode};
        totals[key].add(row);
        per_project[key][row.project].add(row);
    }

    AggregateReport report;
    for (auto& [key, accumulator] : totals) {
        ConfigAggregate aggregate;
        aggregate.row_count = accumulator.row_count;
        aggregate.pa_total = accumulator.pa_total;
        aggregate.ed = accumulator.ed.finish();
        aggregate.lcs = accumulator.lcs.finish();
        for (auto& [project, project_accumulator] : per_project[key]) {
            ProjectAggregate pa;
            pa.row_count = project_accumulator.row_count;
            pa.pa_total = project_accumulator.pa_total;
            pa.ed = project_accumulator.ed.finish();
            pa.lcs = project_accumulator.lcs.finish();
            aggregate.projects.emplace(project, std::move(pa));
        }
        report.emplace(key, std::move(aggregate));
    }
    return report;
}

std::string to_string(MetricId metric) {
    switch (metric) {
        case MetricId::pa_total: return "pa_total";
        case MetricId::ed_median: return "ed_median";
        case MetricId::ed_mean: return "ed_mean";
        case MetricId::ed_norm_median: return "ed_norm_median";
        case MetricId::ed_norm_sum: return "ed_norm_sum";
        case MetricId::lcs_median: return "lcs_median";
        case MetricId::lcs_mean: return "lcs_mean";
        case MetricId::lcs_norm_median: return "lcs_norm_median";
        case MetricId::lcs_norm_sum: return "lcs_norm_sum";
    }
    return "pa_total";
}

MetricId metric_id_from_string(std::string_view s) {
    for (MetricId metric : kAllMetrics) {
        if (to_string(metric) == s) return metric;
    }
    throw ConfigError("unknown metric id: " + std::string(s));
}

bool ascending_is_better(MetricId metric) {
    return metric == MetricId::ed_median || metric == MetricId::ed_mean;
}

double metric_value(const ConfigAggregate& aggregate, MetricId metric) {
    switch (metric) {
        case MetricId::pa_total: return static_cast<double>(aggregate.pa_total);
        case MetricId::ed_median: return aggregate.ed.median;
        case MetricId::ed_mean: return aggregate.ed.mean;
        case MetricId::ed_norm_median: return aggregate.ed.norm_median;
        case MetricId::ed_norm_sum: return aggregate.ed.norm_sum;
        case MetricId::lcs_median: return aggregate.lcs.median;
        case MetricId::lcs_mean: return aggregate.lcs.mean;
        case MetricId::lcs_norm_median: return aggregate.lcs.norm_median;
        case MetricId::lcs_norm_sum: return aggregate.lcs.norm_sum;
    }
    return 0.0;
}

RankTable rank(const AggregateReport& report, MetricId metric) {
    if (report.size() < 2) {
        throw AnalysisError("ranking needs at least two configurations");
    }
    std::vector<std::pair<double, ConfigKey>> values;
    values.reserve(report.size());
    for (const auto& [key, aggregate] : report) {
        values.emplace_back(metric_value(aggregate, metric), key);
    }
    bool ascending = ascending_is_better(metric);
    std::sort(values.begin(), values.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return ascending ? a.first < b.first : a.first > b.first;
        return a.second < b.second;
    });

    RankTable table;
    table.metric = metric;
    int current_rank = 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && values[i].first != values[i - 1].first) {
            current_rank = static_cast<int>(i) + 1;
        } else if (i > 0) {
            table.tie_policy_applied = true;
        }
        table.ranks.emplace(values[i].second, current_rank);
    }
    return table;
}

double pearson_rank_correlation(const std::map<ConfigKey, int>& ranks_a,
                                const std::map<ConfigKey, int>& ranks_b) {
    if (ranks_a.size() != ranks_b.size()) {
        throw AnalysisError("rank vectors cover different configuration sets");
    }
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& [key, value] : ranks_a) {
        auto it = ranks_b.find(key);
        if (it == ranks_b.end()) {
            throw AnalysisError("rank vectors cover different configuration sets");
        }
        a.push_back(value);
        b.push_back(it->second);
    }
    if (a.size() < 2) throw AnalysisError("rank correlation needs at least two entries");

    std::size_t n = a.size();
    double sum_a = 0.0, sum_b = 0.0, sum_ab = 0.0, sum_aa = 0.0, sum_bb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_a += a[i];
        sum_b += b[i];
        sum_ab += a[i] * b[i];
        sum_aa += a[i] * a[i];
        sum_bb += b[i] * b[i];
    }
    double dn = static_cast<double>(n);
    double var_a = dn * sum_aa - sum_a * sum_a;
    double var_b = dn * sum_bb - sum_b * sum_b;
    if (var_a <= 0.0 || var_b <= 0.0) {
        throw AnalysisError("rank correlation undefined: a rank vector has zero variance");
    }
    return (dn * sum_ab - sum_a * sum_b) / std::sqrt(var_a * var_b);
}

namespace {

double pearson_over_points(const std::vector<RankPairPoint>& points) {
    if (points.size() < 2) throw AnalysisError("correlation needs at least two rank pairs");
    double sum_a = 0.0, sum_b = 0.0, sum_ab = 0.0, sum_aa = 0.0, sum_bb = 0.0;
    for (const auto& point : points) {
        double x = point.rank_a;
        double y = point.rank_b;
        sum_a += x;
        sum_b += y;
        sum_ab += x * y;
        sum_aa += x * x;
        sum_bb += y * y;
    }
    double n = static_cast<double>(points.size());
    double var_a = n * sum_aa - sum_a * sum_a;
    double var_b = n * sum_bb - sum_b * sum_b;
    if (var_a <= 0.0 || var_b <= 0.0) {
        throw AnalysisError("correlation undefined: pooled ranks have zero variance");
    }
    return (n * sum_ab - sum_a * sum_b) / std::sqrt(var_a * var_b);
}

Comparison build_comparison(const std::string& id,
                            const std::vector<std::pair<MetricId, MetricId>>& variant_pairs,
                            const std::map<MetricId, RankTable>& tables) {
    Comparison comparison;
    comparison.id = id;
    for (const auto& [metric_a, metric_b] : variant_pairs) {
        const RankTable& table_a = tables.at(metric_a);
        const RankTable& table_b = tables.at(metric_b);
        std::vector<RankPairPoint> variant_points;
        for (const auto& [key, rank_a] : table_a.ranks) {
            RankPairPoint point;
            point.config = key;
            point.metric_a = metric_a;
            point.metric_b = metric_b;
            point.rank_a = rank_a;
            point.rank_b = table_b.ranks.at(key);
            variant_points.push_back(point);
        }
        comparison.per_variant[{metric_a, metric_b}] = pearson_over_points(variant_points);
        for (auto& point : variant_points) {
            if (std::abs(point.rank_a - point.rank_b) >= 2) {
                comparison.deviations.push_back(point);
            }
            comparison.points.push_back(std::move(point));
        }
    }
    comparison.pooled_coefficient = pearson_over_points(comparison.points);
    std::sort(comparison.deviations.begin(), comparison.deviations.end(),
              [](const RankPairPoint& a, const RankPairPoint& b) {
                  return std::abs(a.rank_a - a.rank_b) > std::abs(b.rank_a - b.rank_b);
              });
    return comparison;
}

}  // namespace

ComparisonReport comparison_report(const std::map<MetricId, RankTable>& rank_tables) {
    for (MetricId metric : kAllMetrics) {
        if (!rank_tables.count(metric)) {
            throw AnalysisError("missing rank table: " + to_string(metric));
        }
    }

    ComparisonReport report;
    report.mean_vs_median = build_comparison(
        "mean_vs_median",
        {{MetricId::ed_mean, MetricId::ed_median},
         {MetricId::ed_norm_sum, MetricId::ed_norm_median},
         {MetricId::lcs_mean, MetricId::lcs_median},
         {MetricId::lcs_norm_sum, MetricId::lcs_norm_median}},
        rank_tables);
    report.standard_vs_normalized = build_comparison(
        "standard_vs_normalized",
        {{MetricId::ed_median, MetricId::ed_norm_median},
         {MetricId::ed_mean, MetricId::ed_norm_sum},
         {MetricId::lcs_median, MetricId::lcs_norm_median},
         {MetricId::lcs_mean, MetricId::lcs_norm_sum}},
        rank_tables);
    report.ed_vs_lcs = build_comparison(
        "ed_vs_lcs",
        {{MetricId::ed_median, MetricId::lcs_median},
         {MetricId::ed_mean, MetricId::lcs_mean},
         {MetricId::ed_norm_median, MetricId::lcs_norm_median},
         {MetricId::ed_norm_sum, MetricId::lcs_norm_sum}},
        rank_tables);
    return report;
}

}  // namespace logbench
