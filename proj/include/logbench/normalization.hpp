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
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace logbench {

struct NormalizationRule {
    std::string rule_id;
    std::string pattern;      // ECMAScript regular expression source
    std::string replacement;  // normally `<*>`; may use $1 captures
    std::string description;
    int order = 0;
};

struct CompiledRule {
    NormalizationRule rule;
    std::regex re;
};

// Validates and compiles a rule list: unique ids, compiling patterns,
// sorted by `order`.
std::vector<CompiledRule> compile_rules(std::vector<NormalizationRule> rules);

// JSON array of {rule_id, pattern, replacement, description, order}.
std::vector<CompiledRule> load_rules(const std::filesystem::path& path);

struct NormalizedTemplate {
    std::string record_id;
    std::string text;
    std::vector<std::string> rules_fired;     // ids of rules that changed the text
    std::vector<std::string> residual_flags;  // suspicious leftovers, post-rules
};

// Applies the rules in order, each globally, then collapses whitespace runs
// and trims. Residual flags are computed on the final text. Never fails;
// pathological inputs yield flags.
NormalizedTemplate normalize(std::string_view raw_template, const std::vector<CompiledRule>& rules);

// Residual detection on a finished template: "unclosed placeholder"
// (`<*` without `>`), "bare star", "unbalanced brackets".
std::vector<std::string> residual_flags(std::string_view text);

}  // namespace logbench
