// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The gqsm-capacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <gqsm/error.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace gqsm::harness {

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_number(std::string_view text, std::size_t line, std::string_view column) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError(line, "column " + std::string(column) + ": '" + std::string(text) + "' is not a number");
    return v;
}

template <class Int>
Int parse_integer(std::string_view text, std::size_t line, std::string_view column) {
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw ParseError(line, "column " + std::string(column) + ": '" + std::string(text) + "' is not an integer");
    return v;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

/// A plain table written as comma-separated text with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const {
        std::string out;
        auto emit = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        emit(header);
        for (const auto& r : rows) emit(r);
        return out;
    }
};

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------- result rows

struct ResultRow {
    std::string experiment;
    std::string scheme;
    std::string design_method;
    double snr_db = 0.0;
    double i_s = 0.0;
    double i_a = 0.0;
    double i_total = 0.0;
    double std_error = 0.0;
    std::uint64_t n_outer = 0;
    std::uint64_t n_inner = 0;
    std::string density_method;
    double wall_time_s = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols = {"experiment", "scheme",  "design_method",  "snr_db",
                                                  "i_s",        "i_a",     "i_total",        "stderr",
                                                  "n_outer",    "n_inner", "density_method", "wall_time_s",
                                                  "seed"};
    return cols;
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
    Table t;
    t.header = result_columns();
    for (const auto& r : rows) {
        t.rows.push_back({r.experiment, r.scheme, r.design_method, format_number(r.snr_db), format_number(r.i_s),
                          format_number(r.i_a), format_number(r.i_total), format_number(r.std_error),
                          std::to_string(r.n_outer), std::to_string(r.n_inner), r.density_method,
                          format_number(r.wall_time_s), std::to_string(r.seed)});
    }
    return t.to_string();
}

/// Parses and schema-checks a result CSV: exact header, 13 fields per row,
/// finite numeric fields, no commas inside text fields.
inline std::vector<ResultRow> parse_result_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    const auto& cols = result_columns();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (!header_seen) {
            if (cells != cols) throw ParseError(line_no, "header does not match the result schema");
            header_seen = true;
            continue;
        }
        if (cells.size() != cols.size())
            throw ParseError(line_no, "expected " + std::to_string(cols.size()) + " fields, got " +
                                          std::to_string(cells.size()));
        ResultRow r;
        r.experiment = cells[0];
        r.scheme = cells[1];
        r.design_method = cells[2];
        r.snr_db = parse_number(cells[3], line_no, cols[3]);
        r.i_s = parse_number(cells[4], line_no, cols[4]);
        r.i_a = parse_number(cells[5], line_no, cols[5]);
        r.i_total = parse_number(cells[6], line_no, cols[6]);
        r.std_error = parse_number(cells[7], line_no, cols[7]);
        r.n_outer = parse_integer<std::uint64_t>(cells[8], line_no, cols[8]);
        r.n_inner = parse_integer<std::uint64_t>(cells[9], line_no, cols[9]);
        r.density_method = cells[10];
        r.wall_time_s = parse_number(cells[11], line_no, cols[11]);
        r.seed = parse_integer<std::uint64_t>(cells[12], line_no, cols[12]);
        for (double v : {r.snr_db, r.i_s, r.i_a, r.i_total, r.std_error, r.wall_time_s})
            if (!std::isfinite(v)) throw ParseError(line_no, "non-finite numeric field");
        if (r.experiment.empty() || r.scheme.empty() || r.density_method.empty())
            throw ParseError(line_no, "empty text field");
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError(line_no, "missing header row");
    return rows;
}

} // namespace gqsm::harness
