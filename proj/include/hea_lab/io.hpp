// Copyright 2026 The hea-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Result tables: CSV with a provenance comment line, atomic file writes.
 *
 * CSV layout: an optional first line starting with '#' carrying provenance,
 * then a header row, then data rows. Separator ',', decimal '.', '\n' line
 * ends.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hea_lab {

inline constexpr std::string_view kVersion = "0.1.0";

/// Fixed-width 64-bit FNV-1a, used to fingerprint configurations.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Shortest-ish decimal that round-trips at 12 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != columns.size()) {
            throw std::logic_error("Table::add_row: row width does not match the header");
        }
        rows.push_back(std::move(row));
    }

    [[nodiscard]] int column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

inline std::string to_csv(const Table &table, std::string_view provenance = {}) {
    std::ostringstream os;
    if (!provenance.empty()) os << "# " << provenance << '\n';
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(table.columns);
    for (const auto &r : table.rows) line(r);
    return os.str();
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline Table parse_csv(std::string_view text) {
    Table t;
    bool header = false;
    for (const auto &raw : split(text, '\n')) {
        if (raw.empty() || raw[0] == '#') continue;
        auto cells = split(raw, ',');
        if (!header) {
            t.columns = std::move(cells);
            header = true;
        } else {
            if (cells.size() != t.columns.size()) {
                throw std::invalid_argument("parse_csv: ragged row '" + raw + "'");
            }
            t.rows.push_back(std::move(cells));
        }
    }
    if (!header) throw std::invalid_argument("parse_csv: missing header row");
    return t;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Writes to `path.tmp` and renames over `path`.
inline void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

} // namespace hea_lab
