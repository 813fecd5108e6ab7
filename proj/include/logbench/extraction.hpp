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
#include <vector>

#include "logbench/llm_client.hpp"

namespace logbench {

enum class ExtractionClass {
    well_formed,
    single_tag_only,
    multiple_pairs,
    untagged_plaintext,
    echoed_prompt,
    empty_response,
    not_found,
};

std::string to_string(ExtractionClass cls);
ExtractionClass extraction_class_from_string(std::string_view s);

struct ExtractionOptions {
    std::string tpl_open = "<TPL>";
    std::string tpl_close = "</TPL>";
    // A response is an echo when at least this share of its non-empty lines
    // appears verbatim in the prompt.
    double echo_threshold = 0.9;
};

struct TemplateCandidate {
    std::string record_id;
    std::optional<std::string> raw_template;
    ExtractionClass extraction_class = ExtractionClass::not_found;
    bool needs_review = true;
    // Offsets into raw_text of the chosen template text, when taken from it.
    std::optional<std::pair<std::size_t, std::size_t>> chosen_span;
};

// Deterministic, exhaustive classification of one response. Every response
// yields a candidate; only well_formed candidates skip review.
TemplateCandidate extract_template(const ModelResponse& response,
                                   std::string_view rendered_prompt_text,
                                   const ExtractionOptions& options = {});

std::map<ExtractionClass, std::size_t> extraction_class_counts(
    const std::vector<TemplateCandidate>& candidates);

// Emits an editable CSV of all needs_review candidates: record_id,
// extraction_class, proposed_template, excerpt. `responses` supplies the
// raw-text excerpts.
void write_review_queue(const std::filesystem::path& path,
                        const std::vector<TemplateCandidate>& candidates,
                        const std::vector<ModelResponse>& responses);

// Replaces proposed templates with the (possibly human-edited) values from
// a review file. Unknown or duplicate record_ids raise ValidationError.
std::vector<TemplateCandidate> apply_reviews(std::vector<TemplateCandidate> candidates,
                                             const std::filesystem::path& review_file);

}  // namespace logbench
