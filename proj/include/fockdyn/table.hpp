// Copyright 2026 The fockdyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file table.hpp
 * @brief Result tables and their CSV form: a `# key: value` metadata block,
 * one header row, then comma-separated rows of 17-significant-digit numbers.
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fockdyn {

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Table {
    std::string name;  ///< file stem, written as <name>.csv
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
    void meta(std::string key, double value) { metadata.emplace_back(std::move(key), format_number(value)); }

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size())
            throw std::invalid_argument("table " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                                        std::to_string(columns.size()));
        rows.push_back(std::move(row));
    }

    [[nodiscard]] std::size_t column(const std::string& c) const {
        for (std::size_t j = 0; j < columns.size(); ++j)
            if (columns[j] == c) return j;
        throw std::out_of_range("table " + name + ": no column '" + c + "'");
    }

    [[nodiscard]] std::vector<double> column_values(const std::string& c) const {
        const auto j = column(c);
        std::vector<double> v;
        v.reserve(rows.size());
        for (const auto& r : rows) v.push_back(r[j]);
        return v;
    }
};

inline void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!std::isfinite(r[j]))
                throw std::domain_error("table " + t.name + ": non-finite value in column " + t.columns[j]);
            os << (j ? "," : "") << format_number(r[j]);
        }
        os << '\n';
    }
}

/// Writes <dir>/<table.name>.csv, creating `dir` if needed; returns the path.
inline std::filesystem::path write_csv(const std::filesystem::path& dir, const Table& t) {
    std::filesystem::create_directories(dir);
    const auto path = dir / (t.name + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv(out, t);
    if (!out) throw std::runtime_error("error writing " + path.string());
    return path;
}

} // namespace fockdyn
