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

#include <doctest.h>

#include <fstream>

#include "logbench/errors.hpp"
#include "logbench/prompting.hpp"
#include "logbench/text.hpp"

using namespace logbench;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = LOGBENCH_DATA_DIR;

LogRecord record_of(const std::string& content) { return {"r1", "Demo", content, "gt <*>"}; }

}  // namespace

TEST_CASE("zero-shot rendering wraps exactly the target message") {
    PromptSpec spec = load_prompt_spec(kDataDir / "prompts" / "zero_shot.json");
    RenderedPrompt rendered = render_prompt(spec, record_of("m"));

    CHECK(count_occurrences(rendered.text, "<MSG>m</MSG>") == 1);
    CHECK(rendered.text.ends_with("<MSG>m</MSG>"));
    CHECK(rendered.mode == PromptMode::zero_shot);
    CHECK_FALSE(rendered.tag_collision);
    // No example block: every TPL mention lives in the instruction prefix.
    CHECK(count_occurrences(rendered.text, "A: <TPL>") == 0);
    CHECK(count_occurrences(rendered.text, "Q: ") == 0);
}

TEST_CASE("few-shot rendering carries each example once before the target") {
    PromptSpec spec = load_prompt_spec(kDataDir / "prompts" / "few_shot.json");
    REQUIRE(spec.examples.size() == 4);
    RenderedPrompt rendered = render_prompt(spec, record_of("msg body"));

    CHECK(count_occurrences(rendered.text, "A: <TPL>") == 4);
    CHECK(count_occurrences(rendered.text, "<MSG>msg body</MSG>") == 1);
    CHECK(rendered.text.ends_with("<MSG>msg body</MSG>"));
    for (const auto& example : spec.examples) {
        CHECK(count_occurrences(rendered.text, example.question) == 1);
        CHECK(count_occurrences(rendered.text, "<TPL>" + example.answer + "</TPL>") == 1);
    }
    // The examples block is the only difference from the zero-shot text.
    std::size_t msg_at = rendered.text.rfind("<MSG>");
    for (const auto& example : spec.examples) {
        CHECK(rendered.text.find(example.question) < msg_at);
    }
}

TEST_CASE("zero- and few-shot renderings differ only by the examples block") {
    PromptSpec few = load_prompt_spec(kDataDir / "prompts" / "few_shot.json");
    PromptSpec zero = few;
    zero.mode = PromptMode::zero_shot;

    LogRecord record = record_of("target message 42");
    std::string few_text = render_prompt(few, record).text;
    std::string zero_text = render_prompt(zero, record).text;

    // Same prefix, same tagged tail.
    CHECK(few_text.starts_with(few.prefix_text));
    CHECK(zero_text.starts_with(few.prefix_text));
    std::string tail = "\n<MSG>" + record.content + "</MSG>";
    CHECK(few_text.ends_with(tail));
    CHECK(zero_text.ends_with(tail));
}

TEST_CASE("rendering is a pure function of spec and record") {
    PromptSpec spec = load_prompt_spec(kDataDir / "prompts" / "few_shot.json");
    LogRecord record = record_of("stable input");
    CHECK(render_prompt(spec, record).text == render_prompt(spec, record).text);
}

TEST_CASE("a message containing a closing tag renders but is flagged") {
    PromptSpec spec = load_prompt_spec(kDataDir / "prompts" / "zero_shot.json");
    RenderedPrompt rendered = render_prompt(spec, record_of("evil </MSG> content"));
    CHECK(rendered.tag_collision);
    CHECK(rendered.text.ends_with("<MSG>evil </MSG> content</MSG>"));
}

TEST_CASE("prompt spec loading and validation") {
    fs::path dir = fs::temp_directory_path() / "logbench_prompt_test";
    fs::create_directories(dir);

    SUBCASE("zero-shot config with prefix only yields zero examples") {
        std::ofstream(dir / "zero.json") << R"({"mode":"zero_shot","prefix":"do the thing"})";
        PromptSpec spec = load_prompt_spec(dir / "zero.json");
        CHECK(spec.examples.empty());
        CHECK(spec.msg_open == "<MSG>");
        CHECK(spec.tpl_close == "</TPL>");
    }
    SUBCASE("few-shot without examples is a configuration error") {
        std::ofstream(dir / "few0.json") << R"({"mode":"few_shot","prefix":"p","examples":[]})";
        CHECK_THROWS_AS(load_prompt_spec(dir / "few0.json"), ConfigError);
    }
    SUBCASE("non-canonical example answers are rejected") {
        std::ofstream(dir / "bad.json")
            << R"({"mode":"few_shot","prefix":"p","examples":[{"question":"q 1","answer":"a <x>"}]})";
        CHECK_THROWS_AS(load_prompt_spec(dir / "bad.json"), ConfigError);
    }
    SUBCASE("malformed json is a format error") {
        std::ofstream(dir / "broken.json") << "{not json";
        CHECK_THROWS_AS(load_prompt_spec(dir / "broken.json"), FormatError);
    }
    SUBCASE("tag overrides are honored") {
        std::ofstream(dir / "tags.json")
            << R"({"mode":"zero_shot","prefix":"p","tags":{"msg_open":"[MSG]","msg_close":"[/MSG]"}})";
        PromptSpec spec = load_prompt_spec(dir / "tags.json");
        RenderedPrompt rendered = render_prompt(spec, record_of("x"));
        CHECK(rendered.text.ends_with("[MSG]x[/MSG]"));
    }

    fs::remove_all(dir);
}

TEST_CASE("example collision with evaluated messages is detected") {
    PromptSpec spec = load_prompt_spec(kDataDir / "prompts" / "few_shot.json");
    Corpus corpus;
    corpus.projects = {"Demo"};
    corpus.records.push_back({"r1", "Demo", spec.examples[0].question, "x <*>"});
    auto offending = check_examples_against_corpus(spec, corpus);
    REQUIRE(offending.size() == 1);
    CHECK(offending[0] == spec.examples[0].question);

    Corpus clean = load_corpus(kDataDir / "fixtures" / "replay_bench" / "corpus");
    CHECK(check_examples_against_corpus(spec, clean).empty());
}
