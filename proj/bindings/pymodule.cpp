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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "logbench/analysis.hpp"
#include "logbench/corpus.hpp"
#include "logbench/errors.hpp"
#include "logbench/extraction.hpp"
#include "logbench/llm_client.hpp"
#include "logbench/metrics.hpp"
#include "logbench/normalization.hpp"
#include "logbench/prompting.hpp"

namespace py = pybind11;
using namespace logbench;

namespace {

// Compiled rule lists are opaque on the python side.
struct RuleSet {
    std::vector<CompiledRule> rules;
};

py::dict variants_to_dict(const MetricVariants& variants) {
    py::dict out;
    out["median"] = variants.median;
    out["mean"] = variants.mean;
    out["norm_median"] = variants.norm_median;
    out["norm_sum"] = variants.norm_sum;
    return out;
}

py::dict aggregate_to_dict(const AggregateReport& report) {
    py::dict out;
    for (const auto& [key, aggregate] : report) {
        py::dict entry;
        entry["row_count"] = aggregate.row_count;
        entry["pa_total"] = aggregate.pa_total;
        entry["ed"] = variants_to_dict(aggregate.ed);
        entry["lcs"] = variants_to_dict(aggregate.lcs);
        py::dict projects;
        for (const auto& [project, pa] : aggregate.projects) {
            py::dict project_entry;
            project_entry["row_count"] = pa.row_count;
            project_entry["pa_total"] = pa.pa_total;
            project_entry["ed"] = variants_to_dict(pa.ed);
            project_entry["lcs"] = variants_to_dict(pa.lcs);
            projects[py::str(project)] = project_entry;
        }
        entry["projects"] = projects;
        out[py::str(key.label())] = entry;
    }
    return out;
}

std::map<ConfigKey, int> ranks_from_dict(const std::map<std::string, int>& ranks) {
    std::map<ConfigKey, int> out;
    for (const auto& [label, value] : ranks) out[{label, ""}] = value;
    return out;
}

}  // namespace

PYBIND11_MODULE(_logbench, m) {
    m.doc() = "LLM log parsing benchmark harness: metrics, normalization, extraction, prompts";

    py::register_exception<Error>(m, "LogbenchError");

    // --- metrics ---
    m.def("edit_distance", &edit_distance, py::arg("a"), py::arg("b"),
          "Character-level Levenshtein distance.");
    m.def("longest_common_subsequence", &longest_common_subsequence, py::arg("a"), py::arg("b"),
          "Length of the longest common character subsequence.");
    m.def("parsing_accuracy", &parsing_accuracy, py::arg("template_text"), py::arg("ground_truth"),
          "Token-for-token template equality.");

    py::class_<ScoreRow>(m, "ScoreRow")
        .def_readonly("record_id", &ScoreRow::record_id)
        .def_readonly("project", &ScoreRow::project)
        .def_readonly("provider_id", &ScoreRow::provider_id)
        .def_readonly("mode", &ScoreRow::mode)
        .def_readonly("pa", &ScoreRow::pa)
        .def_readonly("ed", &ScoreRow::ed)
        .def_readonly("lcs", &ScoreRow::lcs)
        .def_readonly("es_norm", &ScoreRow::es_norm)
        .def_readonly("lcs_norm", &ScoreRow::lcs_norm)
        .def_readonly("len_t", &ScoreRow::len_t)
        .def_readonly("len_gt", &ScoreRow::len_gt)
        .def("__repr__", [](const ScoreRow& row) {
            return "<ScoreRow pa=" + std::string(row.pa ? "True" : "False") +
                   " ed=" + std::to_string(row.ed) + " lcs=" + std::to_string(row.lcs) + ">";
        });

    m.def("score", &score_pair, py::arg("template_text"), py::arg("ground_truth"),
          "All per-message metrics for one template/ground-truth pair.");
    m.def(
        "score_record",
        [](const std::optional<std::string>& template_text, const LogRecord& record,
           const std::string& provider_id, const std::string& mode) {
            return score_record(template_text, record, provider_id, mode);
        },
        py::arg("template_text"), py::arg("record"), py::arg("provider_id") = "",
        py::arg("mode") = "", "Score a record; None scores as the empty template.");

    // --- corpus ---
    py::class_<LogRecord>(m, "LogRecord")
        .def(py::init([](std::string record_id, std::string project, std::string content,
                         std::string ground_truth) {
                 return LogRecord{std::move(record_id), std::move(project), std::move(content),
                                  std::move(ground_truth)};
             }),
             py::arg("record_id"), py::arg("project"), py::arg("content"), py::arg("ground_truth"))
        .def_readonly("record_id", &LogRecord::record_id)
        .def_readonly("project", &LogRecord::project)
        .def_readonly("content", &LogRecord::content)
        .def_readonly("ground_truth", &LogRecord::ground_truth);

    py::class_<Corpus>(m, "Corpus")
        .def_readonly("projects", &Corpus::projects)
        .def_readonly("records", &Corpus::records)
        .def("project_counts", &Corpus::project_counts)
        .def("__len__", [](const Corpus& corpus) { return corpus.records.size(); });

    m.def(
        "load_corpus",
        [](const std::filesystem::path& dir,
           const std::optional<std::filesystem::path>& manifest_path) {
            std::optional<Manifest> manifest;
            if (manifest_path) manifest = load_manifest(*manifest_path);
            return load_corpus(dir, manifest);
        },
        py::arg("directory"), py::arg("manifest") = py::none(),
        "Load per-project CSV files; optionally enforce a project=count manifest.");
    m.def("corpus_hash", &corpus_hash, py::arg("corpus"));
    m.def("validate_ground_truth", &validate_ground_truth, py::arg("template_text"),
          "Violations of the canonical placeholder form; empty means valid.");

    // --- normalization ---
    py::class_<RuleSet>(m, "RuleSet")
        .def("__len__", [](const RuleSet& rules) { return rules.rules.size(); });
    m.def(
        "load_rules",
        [](const std::filesystem::path& path) { return RuleSet{load_rules(path)}; },
        py::arg("path"));

    py::class_<NormalizedTemplate>(m, "NormalizedTemplate")
        .def_readonly("text", &NormalizedTemplate::text)
        .def_readonly("rules_fired", &NormalizedTemplate::rules_fired)
        .def_readonly("residual_flags", &NormalizedTemplate::residual_flags);
    m.def(
        "normalize",
        [](const std::string& raw_template, const RuleSet& rules) {
            return normalize(raw_template, rules.rules);
        },
        py::arg("raw_template"), py::arg("rules"),
        "Canonicalize placeholder notation to <*>, collapse whitespace, flag leftovers.");

    // --- prompting ---
    py::enum_<PromptMode>(m, "PromptMode")
        .value("zero_shot", PromptMode::zero_shot)
        .value("few_shot", PromptMode::few_shot);

    py::class_<PromptSpec>(m, "PromptSpec")
        .def_readonly("mode", &PromptSpec::mode)
        .def_readonly("prefix_text", &PromptSpec::prefix_text)
        .def_readonly("provenance", &PromptSpec::provenance)
        .def("__len__", [](const PromptSpec& spec) { return spec.examples.size(); });
    m.def("load_prompt_spec", &load_prompt_spec, py::arg("path"));

    py::class_<RenderedPrompt>(m, "RenderedPrompt")
        .def_readonly("text", &RenderedPrompt::text)
        .def_readonly("record_id", &RenderedPrompt::record_id)
        .def_readonly("mode", &RenderedPrompt::mode)
        .def_readonly("tag_collision", &RenderedPrompt::tag_collision);
    m.def("render_prompt", &render_prompt, py::arg("spec"), py::arg("record"));

    // --- extraction ---
    py::class_<TemplateCandidate>(m, "TemplateCandidate")
        .def_readonly("record_id", &TemplateCandidate::record_id)
        .def_readonly("raw_template", &TemplateCandidate::raw_template)
        .def_property_readonly(
            "extraction_class",
            [](const TemplateCandidate& candidate) { return to_string(candidate.extraction_class); })
        .def_readonly("needs_review", &TemplateCandidate::needs_review)
        .def_readonly("chosen_span", &TemplateCandidate::chosen_span);
    m.def(
        "extract_template",
        [](const std::string& raw_text, const std::string& prompt_text,
           const std::string& record_id, double echo_threshold) {
            ModelResponse response;
            response.record_id = record_id;
            response.raw_text = raw_text;
            response.status = raw_text.empty() ? ResponseStatus::empty : ResponseStatus::ok;
            ExtractionOptions options;
            options.echo_threshold = echo_threshold;
            return extract_template(response, prompt_text, options);
        },
        py::arg("raw_text"), py::arg("prompt_text"), py::arg("record_id") = "",
        py::arg("echo_threshold") = 0.9,
        "Locate the raw template in a model response and classify the response.");

    // --- client plumbing ---
    m.def("request_fingerprint", &request_fingerprint, py::arg("prompt_text"),
          py::arg("model_name"), py::arg("temperature"),
          "Stable content hash used as the response-cache key.");

    // --- analysis ---
    m.def(
        "aggregate_scores",
        [](const std::vector<ScoreRow>& rows) { return aggregate_to_dict(aggregate(rows)); },
        py::arg("rows"), "Per-configuration metric variants plus per-project breakdowns.");
    m.def(
        "rank_configurations",
        [](const std::vector<ScoreRow>& rows, const std::string& metric) {
            RankTable table = rank(aggregate(rows), metric_id_from_string(metric));
            std::map<std::string, int> out;
            for (const auto& [key, value] : table.ranks) out[key.label()] = value;
            return out;
        },
        py::arg("rows"), py::arg("metric"),
        "Competition ranks (1 = best) for one of the nine metric variants.");
    m.def(
        "pearson_rank_correlation",
        [](const std::map<std::string, int>& a, const std::map<std::string, int>& b) {
            return pearson_rank_correlation(ranks_from_dict(a), ranks_from_dict(b));
        },
        py::arg("ranks_a"), py::arg("ranks_b"));

    m.attr("METRICS") = [] {
        py::list metrics;
        for (MetricId metric : kAllMetrics) metrics.append(to_string(metric));
        return metrics;
    }();

#ifdef LOGBENCH_VERSION
    m.attr("__version__") = LOGBENCH_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
