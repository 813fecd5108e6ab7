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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "logbench/errors.hpp"
#include "logbench/llm_client.hpp"

using namespace logbench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RenderedPrompt make_prompt(const std::string& record_id, const std::string& text) {
    RenderedPrompt prompt;
    prompt.record_id = record_id;
    prompt.text = text;
    prompt.mode = PromptMode::zero_shot;
    return prompt;
}

ProviderConfig replay_provider(const fs::path& store) {
    ProviderConfig config;
    config.provider_id = "replay-test";
    config.endpoint = "replay:" + store.string();
    config.model_name = "test-model";
    config.temperature = 0.2;
    return config;
}

// A tiny OpenAI-style chat completion stub.
class StubServer {
public:
    StubServer() {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& request,
                                                    httplib::Response& response) {
            ++request_count;
            last_body = request.body;
            if (fail_with_429 > 0) {
                --fail_with_429;
                response.status = 429;
                return;
            }
            nlohmann::json body = nlohmann::json::parse(request.body);
            std::string content =
                reply_empty ? "" : "<TPL>echo of " + body["model"].get<std::string>() + "</TPL>";
            nlohmann::json reply{
                {"choices",
                 nlohmann::json::array({{{"message", {{"role", "assistant"}, {"content", content}}}}})}};
            response.set_content(reply.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const {
        return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
    }

    std::atomic<int> request_count{0};
    std::atomic<int> fail_with_429{0};
    bool reply_empty = false;
    std::string last_body;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_CASE("request fingerprints are stable and input-sensitive") {
    std::string a = request_fingerprint("prompt text", "model-x", 0.2);
    std::string b = request_fingerprint("prompt text", "model-x", 0.2);
    CHECK(a == b);
    CHECK(a.size() == 64);
    CHECK(a.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(request_fingerprint("prompt text!", "model-x", 0.2) != a);
    CHECK(request_fingerprint("prompt text", "model-y", 0.2) != a);
    CHECK(request_fingerprint("prompt text", "model-x", 0.7) != a);
}

TEST_CASE("response cache round-trips json lines") {
    TempDir dir("logbench_cache_test");
    fs::path file = dir.path / "cache.jsonl";
    {
        ResponseCache cache(file);
        ModelResponse response;
        response.record_id = "r1";
        response.provider_id = "p";
        response.mode = "zero";
        response.raw_text = "line one\nline \"two\"";
        response.status = ResponseStatus::ok;
        response.attempt_count = 2;
        response.latency = std::chrono::milliseconds(15);
        response.request_fingerprint = std::string(64, 'a');
        cache.append(response);
    }
    ResponseCache reloaded(file);
    CHECK(reloaded.size() == 1);
    const ModelResponse* found = reloaded.find(std::string(64, 'a'));
    REQUIRE(found != nullptr);
    CHECK(found->raw_text == "line one\nline \"two\"");
    CHECK(found->status == ResponseStatus::ok);
    CHECK(found->attempt_count == 2);
}

TEST_CASE("replay provider serves recorded answers by fingerprint") {
    TempDir dir("logbench_replay_test");
    fs::path store = dir.path / "store.jsonl";

    RenderedPrompt prompt = make_prompt("r1", "the prompt");
    std::string fingerprint = request_fingerprint("the prompt", "test-model", 0.2);
    {
        std::ofstream out(store);
        ModelResponse recorded;
        recorded.record_id = "r1";
        recorded.raw_text = "<TPL>recorded answer</TPL>";
        recorded.status = ResponseStatus::ok;
        recorded.request_fingerprint = fingerprint;
        out << to_json_line(recorded) << '\n';
    }

    ProviderConfig provider = replay_provider(store);
    ModelResponse served = query(provider, prompt);
    CHECK(served.status == ResponseStatus::ok);
    CHECK(served.raw_text == "<TPL>recorded answer</TPL>");
    CHECK(served.request_fingerprint == fingerprint);

    ModelResponse miss = query(provider, make_prompt("r2", "unknown prompt"));
    CHECK(miss.status == ResponseStatus::transport_error);
    CHECK(miss.error_detail == "fingerprint miss");
    CHECK(miss.raw_text.empty());

    // Replay determinism: byte-identical response sequences on rerun.
    ModelResponse again = query(provider, prompt);
    CHECK(to_json_line(again) == to_json_line(served));
}

TEST_CASE("run_batch skips cached fingerprints and preserves input order") {
    TempDir dir("logbench_batch_test");
    fs::path store = dir.path / "store.jsonl";

    std::vector<RenderedPrompt> prompts;
    for (int i = 0; i < 20; ++i) {
        prompts.push_back(make_prompt("r" + std::to_string(i), "prompt #" + std::to_string(i)));
    }
    {
        std::ofstream out(store);
        for (const auto& prompt : prompts) {
            ModelResponse recorded;
            recorded.record_id = prompt.record_id;
            recorded.raw_text = "answer for " + prompt.record_id;
            recorded.status = ResponseStatus::ok;
            recorded.request_fingerprint = request_fingerprint(prompt.text, "test-model", 0.2);
            out << to_json_line(recorded) << '\n';
        }
    }

    ProviderConfig provider = replay_provider(store);
    provider.max_concurrency = 4;

    ResponseCache cache(dir.path / "cache.jsonl");
    auto responses = run_batch(provider, prompts, cache);
    REQUIRE(responses.size() == prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        CHECK(responses[i].record_id == prompts[i].record_id);
        CHECK(responses[i].raw_text == "answer for " + prompts[i].record_id);
    }
    CHECK(cache.size() == prompts.size());

    // Second run: everything is served from the cache, even if the replay
    // store disappears.
    fs::remove(store);
    ResponseCache cache2(dir.path / "cache.jsonl");
    auto rerun = run_batch(provider, prompts, cache2);
    REQUIRE(rerun.size() == prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        CHECK(rerun[i].raw_text == responses[i].raw_text);
    }
    CHECK(cache2.size() == prompts.size());
}

TEST_CASE("a full-scale batch caches every response and surfaces empties") {
    TempDir dir("logbench_batch_full");
    fs::path store = dir.path / "store.jsonl";

    // 1,354 prompts, mirroring the benchmark corpus size; 56 of the
    // recorded completions are empty bodies.
    std::vector<RenderedPrompt> prompts;
    for (int i = 0; i < 1354; ++i) {
        prompts.push_back(make_prompt("r" + std::to_string(i), "batch prompt " + std::to_string(i)));
    }
    {
        std::ofstream out(store);
        for (std::size_t i = 0; i < prompts.size(); ++i) {
            ModelResponse recorded;
            recorded.record_id = prompts[i].record_id;
            recorded.raw_text = i < 56 ? "" : "<TPL>answer " + prompts[i].record_id + "</TPL>";
            recorded.status = recorded.raw_text.empty() ? ResponseStatus::empty : ResponseStatus::ok;
            recorded.request_fingerprint = request_fingerprint(prompts[i].text, "test-model", 0.2);
            out << to_json_line(recorded) << '\n';
        }
    }

    ProviderConfig provider = replay_provider(store);
    provider.max_concurrency = 4;
    ResponseCache cache(dir.path / "cache.jsonl");
    auto responses = run_batch(provider, prompts, cache);

    REQUIRE(responses.size() == 1354);
    CHECK(cache.size() == 1354);
    std::size_t empty_count = 0;
    for (const auto& response : responses) {
        if (response.status == ResponseStatus::empty) ++empty_count;
    }
    CHECK(empty_count == 56);
}

TEST_CASE("failed responses are returned but not cached, so reruns retry them") {
    TempDir dir("logbench_batch_failures");
    fs::path store = dir.path / "store.jsonl";
    std::vector<RenderedPrompt> prompts = {make_prompt("r0", "known prompt"),
                                           make_prompt("r1", "unknown prompt")};
    {
        std::ofstream out(store);
        ModelResponse recorded;
        recorded.record_id = "r0";
        recorded.raw_text = "answer";
        recorded.status = ResponseStatus::ok;
        recorded.request_fingerprint = request_fingerprint(prompts[0].text, "test-model", 0.2);
        out << to_json_line(recorded) << '\n';
    }
    ProviderConfig provider = replay_provider(store);
    ResponseCache cache(dir.path / "cache.jsonl");
    auto responses = run_batch(provider, prompts, cache);
    CHECK(responses[0].status == ResponseStatus::ok);
    CHECK(responses[1].status == ResponseStatus::transport_error);
    CHECK(cache.size() == 1);

    // Completing the store and re-running fills the gap.
    {
        std::ofstream out(store, std::ios::app);
        ModelResponse recorded;
        recorded.record_id = "r1";
        recorded.raw_text = "late answer";
        recorded.status = ResponseStatus::ok;
        recorded.request_fingerprint = request_fingerprint(prompts[1].text, "test-model", 0.2);
        out << to_json_line(recorded) << '\n';
    }
    ResponseCache cache2(dir.path / "cache.jsonl");
    auto retried = run_batch(provider, prompts, cache2);
    CHECK(retried[1].status == ResponseStatus::ok);
    CHECK(retried[1].raw_text == "late answer");
    CHECK(cache2.size() == 2);
}

TEST_CASE("cache contents are order-independent as a set") {
    TempDir dir("logbench_batch_order");
    fs::path store = dir.path / "store.jsonl";
    std::vector<RenderedPrompt> prompts;
    for (int i = 0; i < 12; ++i) {
        prompts.push_back(make_prompt("r" + std::to_string(i), "stable prompt " + std::to_string(i)));
    }
    {
        std::ofstream out(store);
        for (const auto& prompt : prompts) {
            ModelResponse recorded;
            recorded.record_id = prompt.record_id;
            recorded.raw_text = "a:" + prompt.record_id;
            recorded.status = ResponseStatus::ok;
            recorded.request_fingerprint = request_fingerprint(prompt.text, "test-model", 0.2);
            out << to_json_line(recorded) << '\n';
        }
    }
    ProviderConfig provider = replay_provider(store);

    ResponseCache forward_cache(dir.path / "forward.jsonl");
    run_batch(provider, prompts, forward_cache);

    std::vector<RenderedPrompt> reversed(prompts.rbegin(), prompts.rend());
    ResponseCache reversed_cache(dir.path / "reversed.jsonl");
    run_batch(provider, reversed, reversed_cache);

    ResponseCache a(dir.path / "forward.jsonl");
    ResponseCache b(dir.path / "reversed.jsonl");
    REQUIRE(a.size() == b.size());
    for (const auto& prompt : prompts) {
        std::string fp = request_fingerprint(prompt.text, "test-model", 0.2);
        REQUIRE(a.find(fp) != nullptr);
        REQUIRE(b.find(fp) != nullptr);
        CHECK(a.find(fp)->raw_text == b.find(fp)->raw_text);
    }
}

TEST_CASE("live provider against a stub chat server") {
    StubServer server;
    ProviderConfig provider;
    provider.provider_id = "stub";
    provider.endpoint = server.endpoint();
    provider.model_name = "stub-model";
    provider.temperature = 0.2;
    provider.max_retries = 2;
    provider.retry_backoff = std::chrono::milliseconds(5);
    provider.request_timeout = std::chrono::milliseconds(5000);

    SUBCASE("a normal completion lands as status ok") {
        ModelResponse response = query(provider, make_prompt("r1", "hello"));
        CHECK(response.status == ResponseStatus::ok);
        CHECK(response.raw_text == "<TPL>echo of stub-model</TPL>");
        CHECK(response.attempt_count == 1);
        nlohmann::json body = nlohmann::json::parse(server.last_body);
        CHECK(body["temperature"].get<double>() == doctest::Approx(0.2));
        CHECK(body["max_tokens"].get<int>() == 512);
        CHECK(body["messages"][0]["content"].get<std::string>() == "hello");
    }

    SUBCASE("an empty body is status empty, not an error") {
        server.reply_empty = true;
        ModelResponse response = query(provider, make_prompt("r1", "hello"));
        CHECK(response.status == ResponseStatus::empty);
        CHECK(response.raw_text.empty());
    }

    SUBCASE("rate limiting retries with backoff then reports the class") {
        server.fail_with_429 = 1;
        ModelResponse response = query(provider, make_prompt("r1", "hello"));
        CHECK(response.status == ResponseStatus::ok);
        CHECK(response.attempt_count == 2);

        server.fail_with_429 = 99;
        ModelResponse exhausted = query(provider, make_prompt("r2", "hello again"));
        CHECK(exhausted.status == ResponseStatus::rate_limited);
        CHECK(exhausted.attempt_count == provider.max_retries + 1);
    }

    SUBCASE("unresolvable credential fails before any network call") {
        int before = server.request_count;
        provider.auth_ref = "LOGBENCH_TEST_MISSING_CREDENTIAL";
        unsetenv("LOGBENCH_TEST_MISSING_CREDENTIAL");
        CHECK_THROWS_AS(query(provider, make_prompt("r1", "hello")), ConfigError);
        CHECK(server.request_count == before);
    }

    SUBCASE("credential from the environment is attached") {
        provider.auth_ref = "LOGBENCH_TEST_CREDENTIAL";
        setenv("LOGBENCH_TEST_CREDENTIAL", "sekrit", 1);
        ModelResponse response = query(provider, make_prompt("r1", "hello"));
        CHECK(response.status == ResponseStatus::ok);
        unsetenv("LOGBENCH_TEST_CREDENTIAL");
    }
}

TEST_CASE("unreachable endpoints surface as transport errors, not exceptions") {
    ProviderConfig provider;
    provider.provider_id = "down";
    provider.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    provider.model_name = "down-model";
    provider.max_retries = 1;
    provider.retry_backoff = std::chrono::milliseconds(1);
    provider.request_timeout = std::chrono::milliseconds(200);
    ModelResponse response = query(provider, make_prompt("r1", "hello"));
    CHECK((response.status == ResponseStatus::transport_error ||
           response.status == ResponseStatus::timeout));
    CHECK(response.attempt_count == 2);
}

TEST_CASE("provider config validation") {
    TempDir dir("logbench_provider_cfg");
    {
        std::ofstream out(dir.path / "p.json");
        out << R"({"provider_id":"x","endpoint":"replay:foo.jsonl","temperature":0.2,
                   "max_output_tokens":256,"max_retries":1,"max_concurrency":2})";
    }
    ProviderConfig config = load_provider_config(dir.path / "p.json");
    CHECK(config.provider_id == "x");
    CHECK(config.is_replay());
    CHECK(config.replay_path() == "foo.jsonl");
    CHECK(config.temperature == doctest::Approx(0.2));

    {
        std::ofstream out(dir.path / "bad.json");
        out << R"({"provider_id":"x","endpoint":"replay:foo","temperature":3.0})";
    }
    CHECK_THROWS_AS(load_provider_config(dir.path / "bad.json"), ConfigError);
}
