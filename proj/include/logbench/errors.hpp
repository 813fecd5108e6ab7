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

#include <stdexcept>
#include <string>

namespace logbench {

// Error categories double as CLI exit codes (0 is success, 1 unexpected).
enum class ErrorCategory : int {
    config = 2,
    format = 3,
    validation = 4,
    io = 5,
    analysis = 6,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }
    int exit_code() const { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

// Bad run configuration: missing files, unresolvable credentials, invalid
// prompt specs, unknown metric ids.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error(ErrorCategory::config, message) {}
};

// Malformed input files: missing CSV columns, unparseable config records.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error(ErrorCategory::format, message) {}
};

// Well-formed input that violates a contract: empty ground truth,
// non-canonical placeholders, manifest count mismatches.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error(ErrorCategory::validation, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorCategory::io, message) {}
};

class AnalysisError : public Error {
public:
    explicit AnalysisError(const std::string& message) : Error(ErrorCategory::analysis, message) {}
};

}  // namespace logbench
