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

#include "logbench/extraction.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "logbench/csv.hpp"
#include "logbench/errors.hpp"
#include "logbench/text.hpp"

namespace logbench {

std::string to_string(ExtractionClass cls) {
    switch (cls) {
        case ExtractionClass::well_formed: return "well_formed";
        case ExtractionClass::single_tag_only: return "single_tag_only";
        case ExtractionClass::multiple_pairs: return "multiple_pairs";
        case ExtractionClass::untagged_plaintext: return "untagged_plaintext";
        case ExtractionClass::echoed_prompt: return "echoed_prompt";
        case ExtractionClass::empty_response: return "empty_response";
        case ExtractionClass::not_found: return "not_found";
    }
    return "not_found";
}

ExtractionClass extraction_class_from_string(std::string_view s) {
    if (s == "well_formed") return ExtractionClass::well_formed;
    if (s == "single_tag_only") return ExtractionClass::single_tag_only;
    if (s == "multiple_pairs") return ExtractionClass::multiple_pairs;
    if (s == "untagged_plaintext") return ExtractionClass::untagged_plaintext;
    if (s == "echoed_prompt") return ExtractionClass::echoed_prompt;
    if (s == "empty_response") return ExtractionClass::empty_response;
    if (s == "not_found") return ExtractionClass::not_found;
    throw FormatError("unknown extraction class: " + std::string(s));
}

namespace {

std::vector<std::size_t> find_all(std::string_view haystack, std::string_view needle) {
    std::vector<std::size_t> positions;
    std::size_t pos = haystack.find(needle);
    while (pos != std::string_view::npos) {
        positions.push_back(pos);
        pos = haystack.find(needle, pos + needle.size());
    }
    return positions;
}

// Share of non-empty response lines that appear verbatim (after trimming)
// among the prompt's lines. 0 when the response has no non-empty lines.
double echoed_line_share(std::string_view raw_text, std::string_view prompt_text) {
    std::set<std::string_view> prompt_lines;
    for (auto line : split_lines(prompt_text)) {
        auto trimmed = trim(line);
        if (!trimmed.empty()) prompt_lines.insert(trimmed);
    }
    std::size_t total = 0;
    std::size_t echoed = 0;
    for (auto line : split_lines(raw_text)) {
        auto trimmed = trim(line);
        if (trimmed.empty()) continue;
        ++total;
        if (prompt_lines.count(trimmed)) ++echoed;
    }
    if (total == 0) return 0.0;
    return static_cast<double>(echoed) / static_cast<double>(total);
}

}  // namespace

TemplateCandidate extract_template(const ModelResponse& response,
                                   std::string_view rendered_prompt_text,
                                   const ExtractionOptions& options) {
    TemplateCandidate candidate;
    candidate.record_id = response.record_id;
    const std::string& text = response.raw_text;

    auto finish = [&](ExtractionClass cls) {
        candidate.extraction_class = cls;
        candidate.needs_review = cls != ExtractionClass::well_formed;
        return candidate;
    };
    auto take_span = [&](std::size_t begin, std::size_t end) {
        candidate.raw_template = text.substr(begin, end - begin);
        candidate.chosen_span = {begin, end};
    };

    if (text.empty()) {
        return finish(ExtractionClass::empty_response);
    }

    // Echo detection runs before tag classification: an echoed prompt
    // carries the instruction tags (and, few-shot, the example answers), so
    // tag counting alone would misread it.
    if (echoed_line_share(text, rendered_prompt_text) >= options.echo_threshold) {
        return finish(ExtractionClass::echoed_prompt);
    }

    auto opens = find_all(text, options.tpl_open);
    auto closes = find_all(text, options.tpl_close);

    // Complete spans: each open tag paired with the nearest close after it.
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    {
        std::size_t search_from = 0;
        for (std::size_t open : opens) {
            if (open < search_from) continue;
            auto it = std::lower_bound(closes.begin(), closes.end(), open + options.tpl_open.size());
            if (it == closes.end()) break;
            spans.emplace_back(open + options.tpl_open.size(), *it);
            search_from = *it + options.tpl_close.size();
        }
    }

    if (opens.size() == 1 && closes.size() == 1 && spans.size() == 1) {
        take_span(spans[0].first, spans[0].second);
        return finish(ExtractionClass::well_formed);
    }
    if (!spans.empty()) {
        // More tags than one clean pair: keep the first span, flag it.
        take_span(spans[0].first, spans[0].second);
        return finish(ExtractionClass::multiple_pairs);
    }
    if (!opens.empty()) {
        // Open tag without a close: take text after the first open tag up to
        // the end of that line.
        std::size_t begin = opens[0] + options.tpl_open.size();
        std::size_t end = text.find('\n', begin);
        if (end == std::string::npos) end = text.size();
        take_span(begin, end);
        return finish(ExtractionClass::single_tag_only);
    }
    if (!closes.empty()) {
        // Close tag without an open: take that line's text before the tag.
        std::size_t line_start = text.rfind('\n', closes[0]);
        line_start = line_start == std::string::npos ? 0 : line_start + 1;
        take_span(line_start, closes[0]);
        return finish(ExtractionClass::single_tag_only);
    }

    // No tags at all: fall back to the longest non-empty line that is not
    // part of the echoed instructions.
    {
        std::set<std::string_view> prompt_lines;
        for (auto line : split_lines(rendered_prompt_text)) {
            auto trimmed = trim(line);
            if (!trimmed.empty()) prompt_lines.insert(trimmed);
        }
        std::size_t best_begin = 0;
        std::size_t best_len = 0;
        for (auto line : split_lines(text)) {
            auto trimmed = trim(line);
            if (!trimmed.empty() && !prompt_lines.count(trimmed) && trimmed.size() > best_len) {
                best_len = trimmed.size();
                best_begin = static_cast<std::size_t>(trimmed.data() - text.data());
            }
        }
        if (best_len > 0) {
            take_span(best_begin, best_begin + best_len);
            return finish(ExtractionClass::untagged_plaintext);
        }
    }

    return finish(ExtractionClass::not_found);
}

std::map<ExtractionClass, std::size_t> extraction_class_counts(
    const std::vector<TemplateCandidate>& candidates) {
    std::map<ExtractionClass, std::size_t> counts;
    for (int cls = 0; cls <= static_cast<int>(ExtractionClass::not_found); ++cls) {
        counts[static_cast<ExtractionClass>(cls)] = 0;
    }
    for (const auto& candidate : candidates) counts[candidate.extraction_class]++;
    return counts;
}

namespace {

std::string make_excerpt(const std::string& raw_text) {
    constexpr std::size_t kMaxExcerpt = 160;
    std::string excerpt;
    for (char c : raw_text) {
        if (excerpt.size() >= kMaxExcerpt) {
            excerpt += "...";
            break;
        }
        if (c == '\n') {
            excerpt += "\\n";
        } else if (c != '\r') {
            excerpt.push_back(c);
        }
    }
    return excerpt;
}

}  // namespace

void write_review_queue(const std::filesystem::path& path,
                        const std::vector<TemplateCandidate>& candidates,
                        const std::vector<ModelResponse>& responses) {
    std::map<std::string, const ModelResponse*> by_id;
    for (const auto& response : responses) by_id[response.record_id] = &response;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write review file " + path.string());
    out << csv::format_row({"record_id", "extraction_class", "proposed_template", "excerpt"});
    for (const auto& candidate : candidates) {
        if (!candidate.needs_review) continue;
        auto it = by_id.find(candidate.record_id);
        out << csv::format_row({candidate.record_id, to_string(candidate.extraction_class),
                                candidate.raw_template.value_or(""),
                                it != by_id.end() ? make_excerpt(it->second->raw_text) : ""});
    }
    if (!out) throw IoError("write to review file failed: " + path.string());
}

std::vector<TemplateCandidate> apply_reviews(std::vector<TemplateCandidate> candidates,
                                             const std::filesystem::path& review_file) {
    std::ifstream in(review_file, std::ios::binary);
    if (!in) throw IoError("cannot open review file " + review_file.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    csv::Table table = csv::parse(content, review_file.string());

    int id_col = table.column("record_id");
    int template_col = table.column("proposed_template");
    if (id_col < 0 || template_col < 0) {
        throw FormatError(review_file.string() +
                          ": review file needs record_id and proposed_template columns");
    }

    std::map<std::string, const TemplateCandidate*> known;
    for (const auto& candidate : candidates) known[candidate.record_id] = &candidate;

    std::set<std::string> seen;
    std::map<std::string, std::string> edits;
    for (const auto& row : table.rows) {
        const std::string& record_id = row[static_cast<std::size_t>(id_col)];
        if (!seen.insert(record_id).second) {
            throw ValidationError("review file has duplicate record_id " + record_id);
        }
        if (!known.count(record_id)) {
            throw ValidationError("review file references unknown record_id " + record_id);
        }
        edits[record_id] = row[static_cast<std::size_t>(template_col)];
    }

    for (auto& candidate : candidates) {
        auto it = edits.find(candidate.record_id);
        if (it == edits.end()) continue;
        if (it->second.empty()) {
            candidate.raw_template.reset();
        } else {
            candidate.raw_template = it->second;
        }
    }
    return candidates;
}

}  // namespace logbench
