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

#include "logbench/llm_client.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "logbench/errors.hpp"
#include "logbench/hashing.hpp"
#include "logbench/text.hpp"

namespace logbench {

namespace {

std::string format_temperature(double temperature) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", temperature);
    return buf;
}

}  // namespace

ProviderConfig load_provider_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open provider config " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    ProviderConfig config;
    try {
        config.provider_id = doc.at("provider_id").get<std::string>();
        config.endpoint = doc.at("endpoint").get<std::string>();
        config.model_name = doc.value("model_name", config.provider_id);
        config.temperature = doc.value("temperature", 0.2);
        config.max_output_tokens = doc.value("max_output_tokens", 512);
        config.auth_ref = doc.value("auth_ref", std::string());
        config.request_timeout = std::chrono::milliseconds(doc.value("request_timeout_ms", 30000));
        config.max_retries = doc.value("max_retries", 3);
        config.max_concurrency = doc.value("max_concurrency", 4);
        config.retry_backoff = std::chrono::milliseconds(doc.value("retry_backoff_ms", 250));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    validate_provider_config(config);
    return config;
}

void validate_provider_config(const ProviderConfig& config) {
    if (config.provider_id.empty()) throw ConfigError("provider_id is empty");
    if (config.endpoint.empty()) throw ConfigError("provider endpoint is empty");
    if (config.temperature < 0.0 || config.temperature > 1.0) {
        throw ConfigError("temperature must be in [0,1]");
    }
    if (config.max_output_tokens <= 0) throw ConfigError("max_output_tokens must be positive");
    if (config.max_retries < 0) throw ConfigError("max_retries must be non-negative");
    if (config.max_concurrency <= 0) throw ConfigError("max_concurrency must be positive");
}

std::string to_string(ResponseStatus status) {
    switch (status) {
        case ResponseStatus::ok: return "ok";
        case ResponseStatus::empty: return "empty";
        case ResponseStatus::transport_error: return "transport_error";
        case ResponseStatus::rate_limited: return "rate_limited";
        case ResponseStatus::timeout: return "timeout";
    }
    return "transport_error";
}

ResponseStatus response_status_from_string(std::string_view s) {
    if (s == "ok") return ResponseStatus::ok;
    if (s == "empty") return ResponseStatus::empty;
    if (s == "transport_error") return ResponseStatus::transport_error;
    if (s == "rate_limited") return ResponseStatus::rate_limited;
    if (s == "timeout") return ResponseStatus::timeout;
    throw FormatError("unknown response status: " + std::string(s));
}

std::string request_fingerprint(std::string_view prompt_text, std::string_view model_name,
                                double temperature) {
    std::string payload;
    payload.reserve(prompt_text.size() + model_name.size() + 24);
    payload += prompt_text;
    payload.push_back('\0');
    payload += model_name;
    payload.push_back('\0');
    payload += format_temperature(temperature);
    return sha256_hex(payload);
}

std::string to_json_line(const ModelResponse& response) {
    nlohmann::json obj{
        {"record_id", response.record_id},
        {"provider_id", response.provider_id},
        {"mode", response.mode},
        {"raw_text", response.raw_text},
        {"status", to_string(response.status)},
        {"attempt_count", response.attempt_count},
        {"latency_ms", response.latency.count()},
        {"request_fingerprint", response.request_fingerprint},
    };
    if (!response.error_detail.empty()) obj["error_detail"] = response.error_detail;
    return obj.dump();
}

ModelResponse response_from_json_line(std::string_view line, const std::string& source_name) {
    nlohmann::json obj;
    try {
        obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(source_name + ": bad response line: " + e.what());
    }
    ModelResponse response;
    try {
        response.record_id = obj.value("record_id", std::string());
        response.provider_id = obj.value("provider_id", std::string());
        response.mode = obj.value("mode", std::string());
        response.raw_text = obj.at("raw_text").get<std::string>();
        response.status = response_status_from_string(obj.value("status", std::string("ok")));
        response.attempt_count = obj.value("attempt_count", 1);
        response.latency = std::chrono::milliseconds(obj.value("latency_ms", 0));
        response.request_fingerprint = obj.at("request_fingerprint").get<std::string>();
        response.error_detail = obj.value("error_detail", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(source_name + ": bad response line: " + e.what());
    }
    return response;
}

ResponseCache::ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) {
        std::filesystem::create_directories(path_.parent_path());
    }
    std::ifstream in(path_, std::ios::binary);
    if (!in) return;  // fresh cache
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ModelResponse response = response_from_json_line(line, path_.string());
        entries_.emplace(response.request_fingerprint, std::move(response));
    }
}

bool ResponseCache::contains(const std::string& fingerprint) const {
    std::lock_guard lock(mutex_);
    return entries_.count(fingerprint) > 0;
}

const ModelResponse* ResponseCache::find(const std::string& fingerprint) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(fingerprint);
    return it == entries_.end() ? nullptr : &it->second;
}

void ResponseCache::append(const ModelResponse& response) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open response cache for append: " + path_.string());
    out << to_json_line(response) << '\n';
    out.flush();
    if (!out) throw IoError("write to response cache failed: " + path_.string());
    entries_.emplace(response.request_fingerprint, response);
}

namespace {

class ReplayStore {
public:
    explicit ReplayStore(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open replay store " + path.string());
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            ModelResponse response = response_from_json_line(line, path.string());
            entries_.emplace(response.request_fingerprint, std::move(response));
        }
    }

    const ModelResponse* find(const std::string& fingerprint) const {
        auto it = entries_.find(fingerprint);
        return it == entries_.end() ? nullptr : &it->second;
    }

private:
    std::map<std::string, ModelResponse> entries_;
};

ModelResponse replay_query(const ReplayStore& store, const ProviderConfig& provider,
                           const RenderedPrompt& prompt, const std::string& fingerprint) {
    ModelResponse response;
    response.record_id = prompt.record_id;
    response.provider_id = provider.provider_id;
    response.mode = to_string(prompt.mode);
    response.request_fingerprint = fingerprint;
    response.attempt_count = 1;
    if (const ModelResponse* recorded = store.find(fingerprint)) {
        response.raw_text = recorded->raw_text;
        response.status = recorded->raw_text.empty() ? ResponseStatus::empty : ResponseStatus::ok;
    } else {
        response.status = ResponseStatus::transport_error;
        response.error_detail = "fingerprint miss";
        response.raw_text.clear();
    }
    return response;
}

struct HttpAttempt {
    ResponseStatus status = ResponseStatus::transport_error;
    std::string body_text;
    std::string detail;
    bool retryable = false;
};

HttpAttempt http_chat_request(const ProviderConfig& provider, const RenderedPrompt& prompt,
                              const std::string& credential) {
    HttpAttempt attempt;

    // endpoint = scheme://host[:port]/path
    std::size_t scheme_end = provider.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        attempt.status = ResponseStatus::transport_error;
        return attempt;
    }
    std::size_t path_start = provider.endpoint.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? provider.endpoint
                                                         : provider.endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? std::string("/")
                                                       : provider.endpoint.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(provider.request_timeout);
    client.set_read_timeout(provider.request_timeout);
    client.set_write_timeout(provider.request_timeout);

    httplib::Headers headers;
    if (!credential.empty()) {
        headers.emplace("Authorization", "Bearer " + credential);
    }

    nlohmann::json body{
        {"model", provider.model_name},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt.text}}})},
        {"temperature", provider.temperature},
        {"max_tokens", provider.max_output_tokens},
    };

    auto result = client.Post(path, headers, body.dump(), "application/json");
    if (!result) {
        attempt.status = result.error() == httplib::Error::ConnectionTimeout ||
                                 result.error() == httplib::Error::Read
                             ? ResponseStatus::timeout
                             : ResponseStatus::transport_error;
        attempt.detail = httplib::to_string(result.error());
        attempt.retryable = true;
        return attempt;
    }
    if (result->status == 429) {
        attempt.status = ResponseStatus::rate_limited;
        attempt.detail = "http 429";
        attempt.retryable = true;
        return attempt;
    }
    if (result->status >= 500) {
        attempt.status = ResponseStatus::transport_error;
        attempt.detail = "http " + std::to_string(result->status);
        attempt.retryable = true;
        return attempt;
    }
    if (result->status != 200) {
        attempt.status = ResponseStatus::transport_error;
        attempt.detail = "http " + std::to_string(result->status);
        attempt.retryable = false;
        return attempt;
    }

    try {
        nlohmann::json parsed = nlohmann::json::parse(result->body);
        const auto& choices = parsed.at("choices");
        if (!choices.empty()) {
            attempt.body_text = choices.at(0).at("message").at("content").get<std::string>();
        }
    } catch (const nlohmann::json::exception&) {
        attempt.status = ResponseStatus::transport_error;
        attempt.detail = "unparseable completion body";
        attempt.retryable = false;
        return attempt;
    }
    attempt.status = attempt.body_text.empty() ? ResponseStatus::empty : ResponseStatus::ok;
    return attempt;
}

std::string resolve_credential(const ProviderConfig& provider) {
    if (provider.is_replay() || provider.auth_ref.empty()) return {};
    const char* value = std::getenv(provider.auth_ref.c_str());
    if (!value || !*value) {
        throw ConfigError("credential environment variable " + provider.auth_ref + " is not set");
    }
    return value;
}

ModelResponse live_query(const ProviderConfig& provider, const RenderedPrompt& prompt,
                         const std::string& fingerprint, const std::string& credential) {
    ModelResponse response;
    response.record_id = prompt.record_id;
    response.provider_id = provider.provider_id;
    response.mode = to_string(prompt.mode);
    response.request_fingerprint = fingerprint;

    auto start = std::chrono::steady_clock::now();
    HttpAttempt attempt;
    int attempts = 0;
    while (true) {
        ++attempts;
        attempt = http_chat_request(provider, prompt, credential);
        bool transient = attempt.retryable && attempt.status != ResponseStatus::ok &&
                         attempt.status != ResponseStatus::empty;
        if (!transient || attempts > provider.max_retries) break;
        auto delay = provider.retry_backoff * (1 << std::min(attempts - 1, 10));
        std::this_thread::sleep_for(delay);
    }
    response.attempt_count = attempts;
    response.status = attempt.status;
    response.error_detail = attempt.detail;
    response.raw_text = attempt.body_text;
    response.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    return response;
}

}  // namespace

ModelResponse query(const ProviderConfig& provider, const RenderedPrompt& prompt) {
    validate_provider_config(provider);
    std::string fingerprint =
        request_fingerprint(prompt.text, provider.model_name, provider.temperature);
    if (provider.is_replay()) {
        ReplayStore store(provider.replay_path());
        return replay_query(store, provider, prompt, fingerprint);
    }
    std::string credential = resolve_credential(provider);
    return live_query(provider, prompt, fingerprint, credential);
}

std::vector<ModelResponse> run_batch(const ProviderConfig& provider,
                                     const std::vector<RenderedPrompt>& prompts,
                                     ResponseCache& cache) {
    validate_provider_config(provider);

    struct Pending {
        std::size_t index;
        std::string fingerprint;
    };
    std::vector<ModelResponse> results(prompts.size());
    std::vector<Pending> pending;
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        std::string fingerprint =
            request_fingerprint(prompts[i].text, provider.model_name, provider.temperature);
        if (const ModelResponse* cached = cache.find(fingerprint)) {
            results[i] = *cached;
        } else {
            pending.push_back({i, std::move(fingerprint)});
        }
    }
    if (pending.empty()) return results;

    // Credential problems and replay-store problems surface before any
    // request is dispatched.
    std::string credential = resolve_credential(provider);
    std::optional<ReplayStore> replay;
    if (provider.is_replay()) replay.emplace(provider.replay_path());

    std::atomic<std::size_t> next{0};
    std::mutex failure_mutex;
    std::exception_ptr failure;

    auto worker = [&] {
        while (true) {
            std::size_t k = next.fetch_add(1);
            if (k >= pending.size()) return;
            {
                std::lock_guard lock(failure_mutex);
                if (failure) return;
            }
            const auto& item = pending[k];
            ModelResponse response =
                replay ? replay_query(*replay, provider, prompts[item.index], item.fingerprint)
                       : live_query(provider, prompts[item.index], item.fingerprint, credential);
            try {
                // Only completed responses (ok or empty) are cached, so a
                // rerun retries failures. Identical prompts share a
                // fingerprint; first write wins.
                bool completed = response.status == ResponseStatus::ok ||
                                 response.status == ResponseStatus::empty;
                if (completed && !cache.contains(item.fingerprint)) cache.append(response);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            results[item.index] = std::move(response);
        }
    };

    std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(provider.max_concurrency), pending.size());
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (failure) std::rethrow_exception(failure);

    // Identical prompts later in the batch may have been satisfied by an
    // earlier in-flight request; fill them from the cache.
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        if (!results[i].request_fingerprint.empty()) continue;
        std::string fingerprint =
            request_fingerprint(prompts[i].text, provider.model_name, provider.temperature);
        if (const ModelResponse* cached = cache.find(fingerprint)) results[i] = *cached;
    }
    return results;
}

}  // namespace logbench
