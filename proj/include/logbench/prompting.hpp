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
#include <string>
#include <vector>

#include "logbench/corpus.hpp"

namespace logbench {

enum class PromptMode { zero_shot, few_shot };

std::string to_string(PromptMode mode);          // "zero" / "few"
PromptMode prompt_mode_from_string(std::string_view s);

struct PromptExample {
    std::string question;  // raw log message
    std::string answer;    // template with canonical `<*>` placeholders
};

struct PromptSpec {
    PromptMode mode = PromptMode::zero_shot;
    std::string prefix_text;
    std::vector<PromptExample> examples;
    std::string msg_open = "<MSG>";
    std::string msg_close = "</MSG>";
    std::string tpl_open = "<TPL>";
    std::string tpl_close = "</TPL>";
    std::string provenance;  // where the prefix/examples came from
};

// Throws ConfigError on contract violations (few-shot without examples,
// non-canonical example answers).
void validate_prompt_spec(const PromptSpec& spec);

// JSON file with fields `mode`, `prefix`, `examples` [{question, answer}],
// optional `tags` overrides and `provenance`.
PromptSpec load_prompt_spec(const std::filesystem::path& path);

struct RenderedPrompt {
    std::string text;
    std::string record_id;
    PromptMode mode = PromptMode::zero_shot;
    // The message itself contains one of the delimiter tags, so tag-based
    // extraction downstream may misfire on an echoed response.
    bool tag_collision = false;
};

// Pure function of (spec, record); output ends with the tagged target
// message and contains each few-shot example exactly once.
RenderedPrompt render_prompt(const PromptSpec& spec, const LogRecord& record);

// Example questions must not equal any message under evaluation. Returns
// the offending messages.
std::vector<std::string> check_examples_against_corpus(const PromptSpec& spec, const Corpus& corpus);

}  // namespace logbench
