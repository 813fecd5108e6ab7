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

#include "logbench/normalization.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "logbench/errors.hpp"
#include "logbench/text.hpp"

namespace logbench {

std::vector<CompiledRule> compile_rules(std::vector<NormalizationRule> rules) {
    std::stable_sort(rules.begin(), rules.end(),
                     [](const auto& a, const auto& b) { return a.order < b.order; });
    std::set<std::string> ids;
    std::vector<CompiledRule> compiled;
    compiled.reserve(rules.size());
    for (auto& rule : rules) {
        if (rule.rule_id.empty()) {
            throw FormatError("normalization rule with empty rule_id");
        }
        if (!ids.insert(rule.rule_id).second) {
            throw FormatError("duplicate rule_id " + rule.rule_id);
        }
        try {
            std::regex re(rule.pattern, std::regex::ECMAScript);
            compiled.push_back({std::move(rule), std::move(re)});
        } catch (const std::regex_error& e) {
            throw FormatError("rule " + rule.rule_id + ": pattern does not compile: " + e.what());
        }
    }
    return compiled;
}

std::vector<CompiledRule> load_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open rule file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (!doc.is_array()) {
        throw FormatError(path.string() + ": expected a JSON array of rules");
    }
    std::vector<NormalizationRule> rules;
    int index = 0;
    for (const auto& item : doc) {
        NormalizationRule rule;
        try {
            rule.rule_id = item.at("rule_id").get<std::string>();
            rule.pattern = item.at("pattern").get<std::string>();
            rule.replacement = item.value("replacement", std::string("<*>"));
            rule.description = item.value("description", std::string());
            rule.order = item.value("order", index);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + ": rule #" + std::to_string(index) + ": " + e.what());
        }
        rules.push_back(std::move(rule));
        ++index;
    }
    return compile_rules(std::move(rules));
}

std::vector<std::string> residual_flags(std::string_view text) {
    std::vector<std::string> flags;

    bool unclosed = false;
    bool bare_star = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '<' && i + 1 < text.size() && text[i + 1] == '*') {
            if (i + 2 >= text.size() || text[i + 2] != '>') unclosed = true;
        }
        if (text[i] == '*') {
            bool canonical = i > 0 && text[i - 1] == '<' && i + 1 < text.size() && text[i + 1] == '>';
            bool part_of_unclosed = i > 0 && text[i - 1] == '<';
            if (!canonical && !part_of_unclosed) bare_star = true;
        }
    }
    if (unclosed) flags.push_back("unclosed placeholder");
    if (bare_star) flags.push_back("bare star");

    auto count = [&](char c) { return std::count(text.begin(), text.end(), c); };
    if (count('<') != count('>') || count('{') != count('}') || count('[') != count(']')) {
        flags.push_back("unbalanced brackets");
    }
    return flags;
}

NormalizedTemplate normalize(std::string_view raw_template, const std::vector<CompiledRule>& rules) {
    NormalizedTemplate result;
    std::string text(raw_template);
    for (const auto& rule : rules) {
        std::string next = std::regex_replace(text, rule.re, rule.rule.replacement);
        if (next != text) {
            result.rules_fired.push_back(rule.rule.rule_id);
            text = std::move(next);
        }
    }
    result.text = collapse_whitespace(text);
    result.residual_flags = residual_flags(result.text);
    return result;
}

}  // namespace logbench
