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

#include "logbench/scorefile.hpp"

#include <fstream>
#include <sstream>

#include "logbench/csv.hpp"
#include "logbench/errors.hpp"
#include "logbench/text.hpp"

namespace logbench {

namespace {

constexpr const char* kHeaderLine = "# logbench-scores v1";

std::string join(const std::vector<std::string>& parts, char separator) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(separator);
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char separator) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t pos = s.find(separator, start);
        if (pos == std::string::npos) {
            if (start < s.size()) parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

}  // namespace

void write_score_file(const std::filesystem::path& path, const ScoreFile& file) {
    std::ostringstream out;
    out << kHeaderLine << '\n';
    out << "# corpus_hash=" << file.meta.corpus_hash << '\n';
    out << "# rules_hash=" << file.meta.rules_hash << '\n';
    out << "# prompt_hash=" << file.meta.prompt_hash << '\n';
    out << "# provider_id=" << file.meta.provider_id << '\n';
    out << "# model_name=" << file.meta.model_name << '\n';
    out << "# mode=" << file.meta.mode << '\n';
    out << "# temperature=" << format_double(file.meta.temperature, 6) << '\n';
    out << "# max_output_tokens=" << file.meta.max_output_tokens << '\n';
    out << "# max_retries=" << file.meta.max_retries << '\n';
    out << "# echo_threshold=" << format_double(file.meta.echo_threshold, 6) << '\n';
    out << "# extraction";
    for (const auto& [cls, count] : file.extraction_counts) {
        out << ' ' << cls << '=' << count;
    }
    out << '\n';
    out << "# missing_records=" << join(file.missing_records, ';') << '\n';
    out << csv::format_row({"record_id", "project", "provider_id", "mode", "pa", "ed", "lcs",
                            "es_norm", "lcs_norm", "len_t", "len_gt"});
    for (const auto& row : file.rows) {
        out << csv::format_row({row.record_id, row.project, row.provider_id, row.mode,
                                row.pa ? "1" : "0", std::to_string(row.ed), std::to_string(row.lcs),
                                format_double(row.es_norm, 6), format_double(row.lcs_norm, 6),
                                std::to_string(row.len_t), std::to_string(row.len_gt)});
    }

    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw IoError("cannot write score file " + path.string());
    stream << out.str();
    if (!stream) throw IoError("write to score file failed: " + path.string());
}

ScoreFile read_score_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open score file " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    ScoreFile file;
    bool header_seen = false;
    for (auto line_view : split_lines(content)) {
        std::string line(line_view);
        if (line.rfind("# ", 0) != 0) continue;
        if (line == kHeaderLine) {
            header_seen = true;
            continue;
        }
        std::string body = line.substr(2);
        if (body.rfind("extraction", 0) == 0) {
            std::string counts_part = body.substr(10);
            for (const auto& token : split_tokens(counts_part)) {
                std::size_t eq = token.find('=');
                if (eq == std::string_view::npos) continue;
                file.extraction_counts[std::string(token.substr(0, eq))] =
                    std::stoul(std::string(token.substr(eq + 1)));
            }
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string::npos) continue;
        std::string key = body.substr(0, eq);
        std::string value = body.substr(eq + 1);
        if (key == "corpus_hash") file.meta.corpus_hash = value;
        else if (key == "rules_hash") file.meta.rules_hash = value;
        else if (key == "prompt_hash") file.meta.prompt_hash = value;
        else if (key == "provider_id") file.meta.provider_id = value;
        else if (key == "model_name") file.meta.model_name = value;
        else if (key == "mode") file.meta.mode = value;
        else if (key == "temperature") file.meta.temperature = std::stod(value);
        else if (key == "max_output_tokens") file.meta.max_output_tokens = std::stoi(value);
        else if (key == "max_retries") file.meta.max_retries = std::stoi(value);
        else if (key == "echo_threshold") file.meta.echo_threshold = std::stod(value);
        else if (key == "missing_records") file.missing_records = split(value, ';');
    }
    if (!header_seen) {
        throw FormatError(path.string() + ": not a logbench score file");
    }

    csv::Table table = csv::parse(content, path.string());
    const std::vector<std::string> expected = {"record_id", "project", "provider_id", "mode",
                                               "pa",        "ed",      "lcs",         "es_norm",
                                               "lcs_norm",  "len_t",   "len_gt"};
    if (table.header != expected) {
        throw FormatError(path.string() + ": unexpected score column layout");
    }
    for (const auto& raw : table.rows) {
        if (raw.size() != expected.size()) {
            throw FormatError(path.string() + ": short score row");
        }
        ScoreRow row;
        row.record_id = raw[0];
        row.project = raw[1];
        row.provider_id = raw[2];
        row.mode = raw[3];
        row.pa = raw[4] == "1";
        row.ed = std::stoul(raw[5]);
        row.lcs = std::stoul(raw[6]);
        row.len_t = std::stoul(raw[9]);
        row.len_gt = std::stoul(raw[10]);
        std::size_t longest = std::max(row.len_t, row.len_gt);
        row.es_norm = longest == 0
                          ? 1.0
                          : 1.0 - static_cast<double>(row.ed) / static_cast<double>(longest);
        row.lcs_norm = row.len_gt == 0
                           ? (row.len_t == 0 ? 1.0 : 0.0)
                           : static_cast<double>(row.lcs) / static_cast<double>(row.len_gt);
        file.rows.push_back(std::move(row));
    }
    return file;
}

}  // namespace logbench
