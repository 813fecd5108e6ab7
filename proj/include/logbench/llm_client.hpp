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

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "logbench/prompting.hpp"

namespace logbench {

struct ProviderConfig {
    std::string provider_id;
    std::string endpoint;  // http(s) chat-completion URL, or "replay:<path>"
    std::string model_name;
    double temperature = 0.2;
    int max_output_tokens = 512;
    std::string auth_ref;  // environment variable holding the credential
    std::chrono::milliseconds request_timeout{30000};
    int max_retries = 3;
    int max_concurrency = 4;
    std::chrono::milliseconds retry_backoff{250};

    bool is_replay() const { return endpoint.rfind("replay:", 0) == 0; }
    std::filesystem::path replay_path() const { return endpoint.substr(7); }
};

ProviderConfig load_provider_config(const std::filesystem::path& path);
void validate_provider_config(const ProviderConfig& config);

enum class ResponseStatus { ok, empty, transport_error, rate_limited, timeout };

std::string to_string(ResponseStatus status);
ResponseStatus response_status_from_string(std::string_view s);

struct ModelResponse {
    std::string record_id;
    std::string provider_id;
    std::string mode;
    std::string raw_text;  // exactly as received, no trimming
    ResponseStatus status = ResponseStatus::transport_error;
    int attempt_count = 0;
    std::chrono::milliseconds latency{0};
    std::string request_fingerprint;
    std::string error_detail;  // failure annotation ("fingerprint miss", "http 500")
};

// Stable content hash of (prompt text, model name, temperature); lowercase
// hex of a 256-bit digest.
std::string request_fingerprint(std::string_view prompt_text, std::string_view model_name,
                                double temperature);

std::string to_json_line(const ModelResponse& response);
ModelResponse response_from_json_line(std::string_view line, const std::string& source_name);

// Append-only JSON-lines response store keyed by request fingerprint.
class ResponseCache {
public:
    // Loads existing lines if the file exists; creates parent directories.
    explicit ResponseCache(std::filesystem::path path);

    bool contains(const std::string& fingerprint) const;
    const ModelResponse* find(const std::string& fingerprint) const;
    std::size_t size() const { return entries_.size(); }
    const std::filesystem::path& path() const { return path_; }

    // Appends one line and flushes. Throws IoError on write failure;
    // previously appended lines stay on disk.
    void append(const ModelResponse& response);

private:
    std::filesystem::path path_;
    std::map<std::string, ModelResponse> entries_;
    mutable std::mutex mutex_;
};

// Issues one request, retrying transient failures (rate limit, timeout,
// transport) with exponential backoff up to max_retries. Never throws for
// request failures; the final status class is reported in the response.
// Throws ConfigError before any network activity when the credential named
// by auth_ref cannot be resolved.
ModelResponse query(const ProviderConfig& provider, const RenderedPrompt& prompt);

// Dispatches prompts with at most max_concurrency in flight. Prompts whose
// fingerprint is already cached are not re-sent; fresh responses are
// appended to the cache as they arrive. The returned order matches the
// input order regardless of completion order.
std::vector<ModelResponse> run_batch(const ProviderConfig& provider,
                                     const std::vector<RenderedPrompt>& prompts,
                                     ResponseCache& cache);

}  // namespace logbench
