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

#include "logbench/corpus.hpp"
#include "logbench/errors.hpp"

using namespace logbench;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = LOGBENCH_DATA_DIR;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("ground truth validation") {
    CHECK(validate_ground_truth("queue: default").empty());
    CHECK(validate_ground_truth("send <*> bytes").empty());

    auto violations = validate_ground_truth("send <$size$> bytes");
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "non-canonical placeholder at offset 5");

    violations = validate_ground_truth("");
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "empty template");

    CHECK_FALSE(validate_ground_truth("value <pid> seen").empty());
    // A lone '<' with no closing bracket is literal text, not a placeholder.
    CHECK(validate_ground_truth("if a < b then stop").empty());
}

TEST_CASE("loading a small corpus without a manifest") {
    TempDir dir("logbench_corpus_small");
    write_file(dir.path / "Demo.csv",
               "LineId,Content,EventTemplate\n"
               "d1,queue: default,queue: default\n"
               "d2,send 42 bytes,send <*> bytes\n"
               "d3,\"open a, b\",\"open <*>, <*>\"\n");
    Corpus corpus = load_corpus(dir.path);
    REQUIRE(corpus.records.size() == 3);
    CHECK(corpus.projects == std::vector<std::string>{"Demo"});
    CHECK(corpus.records[0].record_id == "d1");
    CHECK(corpus.records[2].content == "open a, b");
    CHECK(corpus.records[2].ground_truth == "open <*>, <*>");
}

TEST_CASE("record ids are synthesized when LineId is absent") {
    TempDir dir("logbench_corpus_noid");
    write_file(dir.path / "P.csv",
               "Content,EventTemplate\n"
               "alpha one,alpha <*>\n"
               "beta two,beta <*>\n");
    Corpus corpus = load_corpus(dir.path);
    CHECK(corpus.records[0].record_id == "P#1");
    CHECK(corpus.records[1].record_id == "P#2");
}

TEST_CASE("load errors name the file and the problem") {
    TempDir dir("logbench_corpus_errors");

    SUBCASE("empty directory") {
        CHECK_THROWS_WITH_AS(load_corpus(dir.path), doctest::Contains("no project files found"),
                             FormatError);
    }
    SUBCASE("missing required column") {
        write_file(dir.path / "Bad.csv", "Content,Template\nx,y\n");
        CHECK_THROWS_WITH_AS(load_corpus(dir.path), doctest::Contains("EventTemplate"), FormatError);
    }
    SUBCASE("empty ground truth names the record") {
        write_file(dir.path / "Bad.csv", "LineId,Content,EventTemplate\nr7,message,\n");
        CHECK_THROWS_WITH_AS(load_corpus(dir.path), doctest::Contains("r7"), ValidationError);
    }
    SUBCASE("non-canonical placeholder is rejected at load") {
        write_file(dir.path / "Bad.csv", "LineId,Content,EventTemplate\nr1,send 4,send <n>\n");
        CHECK_THROWS_AS(load_corpus(dir.path), ValidationError);
    }
    SUBCASE("duplicate record ids are rejected") {
        write_file(dir.path / "Bad.csv",
                   "LineId,Content,EventTemplate\nr1,a one,a <*>\nr1,b two,b <*>\n");
        CHECK_THROWS_WITH_AS(load_corpus(dir.path), doctest::Contains("duplicate"), ValidationError);
    }
}

TEST_CASE("manifest mismatches produce an exact per-project diff") {
    TempDir dir("logbench_corpus_manifest");
    write_file(dir.path / "A.csv", "Content,EventTemplate\nx one,x <*>\ny two,y <*>\n");
    write_file(dir.path / "B.csv", "Content,EventTemplate\nz three,z <*>\n");
    write_file(dir.path / "manifest.txt", "A=2\nB=1\n");

    Corpus corpus = load_corpus(dir.path, load_manifest(dir.path / "manifest.txt"));
    CHECK(corpus.records.size() == 3);

    write_file(dir.path / "manifest_bad.txt", "A=2\nB=5\nC=1\n");
    try {
        load_corpus(dir.path, load_manifest(dir.path / "manifest_bad.txt"));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string message = e.what();
        CHECK(message.find("B: expected 5, actual 1") != std::string::npos);
        CHECK(message.find("C: expected 1, actual 0") != std::string::npos);
        CHECK(message.find("A:") == std::string::npos);
    }
}

TEST_CASE("the bundled corrected corpus passes the census gate") {
    Corpus corpus = load_corpus(kDataDir / "fixtures" / "corrected_corpus",
                                load_manifest(kDataDir / "fixtures" / "corrected_corpus_manifest.txt"));
    CHECK(corpus.projects.size() == 16);
    CHECK(corpus.records.size() == 1354);
    auto counts = corpus.project_counts();
    CHECK(counts.at("Mac") == 341);
    CHECK(counts.at("Android") == 158);
    CHECK(counts.at("OpenSSH") == 26);
    CHECK(counts.at("Apache") == 6);
}

TEST_CASE("load is deterministic and save/load round-trips") {
    Corpus original = load_corpus(kDataDir / "fixtures" / "replay_bench" / "corpus");
    Corpus again = load_corpus(kDataDir / "fixtures" / "replay_bench" / "corpus");
    CHECK(original == again);
    CHECK(corpus_hash(original) == corpus_hash(again));

    TempDir dir("logbench_corpus_roundtrip");
    save_corpus(original, dir.path);
    Corpus reloaded = load_corpus(dir.path);
    CHECK(reloaded == original);
    CHECK(corpus_hash(reloaded) == corpus_hash(original));
}

TEST_CASE("project order follows lexicographic file order") {
    TempDir dir("logbench_corpus_order");
    write_file(dir.path / "Zeta.csv", "Content,EventTemplate\nz msg,z msg\n");
    write_file(dir.path / "Alpha.csv", "Content,EventTemplate\na msg,a msg\n");
    Corpus corpus = load_corpus(dir.path);
    CHECK(corpus.projects == std::vector<std::string>{"Alpha", "Zeta"});
    CHECK(corpus.records[0].project == "Alpha");
}
