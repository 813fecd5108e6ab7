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

namespace logbench::csv {

// RFC 4180 style: comma separated, double-quote quoting, quotes escaped by
// doubling, newlines allowed inside quoted fields. Lines starting with '#'
// outside of a record are treated as comments and skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, or -1.
    int column(std::string_view name) const;
};

Table parse(std::string_view content, const std::string& source_name);

std::string escape_field(std::string_view field);

std::string format_row(const std::vector<std::string>& fields);

}  // namespace logbench::csv
