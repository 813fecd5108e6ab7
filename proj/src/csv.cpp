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

#include "logbench/csv.hpp"

#include "logbench/errors.hpp"

namespace logbench::csv {

int Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

Table parse(std::string_view content, const std::string& source_name) {
    Table table;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool row_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = std::move(row);
        } else {
            table.rows.push_back(std::move(row));
        }
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty()) {
                    throw FormatError(source_name + ":" + std::to_string(line) +
                                      ": quote inside unquoted field");
                }
                in_quotes = true;
                field_started = true;
                row_started = true;
                break;
            case ',':
                end_field();
                row_started = true;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                if (row_started || field_started || !row.empty()) {
                    end_row();
                }
                break;
            case '#':
                if (!row_started && !field_started && row.empty()) {
                    // Comment line: skip to end of line.
                    while (i < content.size() && content[i] != '\n') ++i;
                    ++line;
                } else {
                    field.push_back(c);
                    field_started = true;
                }
                break;
            default:
                field.push_back(c);
                field_started = true;
                row_started = true;
                break;
        }
    }
    if (in_quotes) {
        throw FormatError(source_name + ": unterminated quoted field");
    }
    if (row_started || field_started || !row.empty()) {
        end_row();
    }
    return table;
}

std::string escape_field(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!field.empty() && (field.front() == '#' || field.front() == ' ' || field.back() == ' ')) {
        needs_quotes = true;
    }
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape_field(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace logbench::csv
