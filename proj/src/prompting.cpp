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

#include "logbench/prompting.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "logbench/errors.hpp"
#include "logbench/text.hpp"

namespace logbench {

std::string to_string(PromptMode mode) {
    return mode == PromptMode::zero_shot ? "zero" : "few";
}

PromptMode prompt_mode_from_string(std::string_view s) {
    if (s == "zero" || s == "zero_shot") return PromptMode::zero_shot;
    if (s == "few" || s == "few_shot") return PromptMode::few_shot;
    throw ConfigError("unknown prompt mode: " + std::string(s));
}

void validate_prompt_spec(const PromptSpec& spec) {
    if (spec.mode == PromptMode::few_shot && spec.examples.empty()) {
        throw ConfigError("few_shot prompt spec requires at least one example");
    }
    if (spec.prefix_text.empty()) {
        throw ConfigError("prompt spec has an empty prefix");
    }
    for (const auto& tag : {spec.msg_open, spec.msg_close, spec.tpl_open, spec.tpl_close}) {
        if (tag.empty()) throw ConfigError("prompt spec has an empty delimiter tag");
    }
    for (std::size_t i = 0; i < spec.examples.size(); ++i) {
        const auto& example = spec.examples[i];
        if (example.question.empty() || example.answer.empty()) {
            throw ConfigError("prompt example #" + std::to_string(i + 1) + " is incomplete");
        }
        auto violations = validate_ground_truth(example.answer);
        if (!violations.empty()) {
            throw ConfigError("prompt example #" + std::to_string(i + 1) +
                              " answer is not canonical: " + violations.front());
        }
    }
}

PromptSpec load_prompt_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open prompt spec " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }

    PromptSpec spec;
    try {
        spec.mode = prompt_mode_from_string(doc.at("mode").get<std::string>());
        spec.prefix_text = doc.at("prefix").get<std::string>();
        if (doc.contains("examples")) {
            for (const auto& item : doc.at("examples")) {
                spec.examples.push_back({item.at("question").get<std::string>(),
                                         item.at("answer").get<std::string>()});
            }
        }
        if (doc.contains("tags")) {
            const auto& tags = doc.at("tags");
            spec.msg_open = tags.value("msg_open", spec.msg_open);
            spec.msg_close = tags.value("msg_close", spec.msg_close);
            spec.tpl_open = tags.value("tpl_open", spec.tpl_open);
            spec.tpl_close = tags.value("tpl_close", spec.tpl_close);
        }
        spec.provenance = doc.value("provenance", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    validate_prompt_spec(spec);
    return spec;
}

RenderedPrompt render_prompt(const PromptSpec& spec, const LogRecord& record) {
    validate_prompt_spec(spec);

    RenderedPrompt rendered;
    rendered.record_id = record.record_id;
    rendered.mode = spec.mode;

    std::string text = spec.prefix_text;
    if (!text.empty() && text.back() != '\n') text.push_back('\n');

    if (spec.mode == PromptMode::few_shot) {
        for (const auto& example : spec.examples) {
            text += "\nQ: ";
            text += example.question;
            text += "\nA: ";
            text += spec.tpl_open;
            text += example.answer;
            text += spec.tpl_close;
            text.push_back('\n');
        }
    }

    text.push_back('\n');
    text += spec.msg_open;
    text += record.content;
    text += spec.msg_close;

    for (const auto& tag : {spec.msg_open, spec.msg_close, spec.tpl_open, spec.tpl_close}) {
        if (record.content.find(tag) != std::string::npos) {
            rendered.tag_collision = true;
            break;
        }
    }

    rendered.text = std::move(text);
    return rendered;
}

std::vector<std::string> check_examples_against_corpus(const PromptSpec& spec, const Corpus& corpus) {
    std::set<std::string_view> messages;
    for (const auto& record : corpus.records) messages.insert(record.content);
    std::vector<std::string> offending;
    for (const auto& example : spec.examples) {
        if (messages.count(example.question)) offending.push_back(example.question);
    }
    return offending;
}

}  // namespace logbench
