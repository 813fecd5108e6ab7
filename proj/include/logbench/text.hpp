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

#include <string>
#include <string_view>
#include <vector>

namespace logbench {

std::string_view trim(std::string_view s);

// Collapses runs of spaces/tabs to a single space and trims the ends.
// Newlines are treated like spaces; templates are single logical lines.
std::string collapse_whitespace(std::string_view s);

// Splits on '\n'; a trailing newline does not produce an empty last element.
std::vector<std::string_view> split_lines(std::string_view s);

std::vector<std::string_view> split_tokens(std::string_view s);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

// Fixed-format floating point (C locale, no scientific notation); used for
// all text output so files are byte-stable across platforms.
std::string format_double(double value, int decimals);

}  // namespace logbench
