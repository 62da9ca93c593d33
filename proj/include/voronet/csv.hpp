#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "voronet/sample_set.hpp"

namespace voronet {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Locale-independent: from_chars always uses '.' as the decimal point.
inline double parse_cell(std::string_view cell, const std::string& where) {
    const std::string_view t = trim(cell);
    if (t.empty()) throw CsvError(where + ": empty cell");
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw CsvError(where + ": non-numeric cell '" + std::string(t) + "'");
    return v;
}

inline std::vector<std::string_view> split_line(std::string_view line) {
    std::vector<std::string_view> cells;
    while (true) {
        const std::size_t pos = line.find(',');
        cells.push_back(line.substr(0, pos));
        if (pos == std::string_view::npos) break;
        line = line.substr(pos + 1);
    }
    return cells;
}

struct CsvTable {
    std::vector<double> cells;  // row-major
    std::size_t rows = 0;
    std::size_t cols = 0;
};

// Shared reader: fixed column count inferred from the first data row (or
// required via `need_cols`), 1-based line numbers in every message.
inline CsvTable read_numeric_csv(const std::filesystem::path& path, bool has_header,
                                 std::size_t need_cols = 0) {
    const std::string text = read_file(path);
    const std::string prefix = path.filename().string();
    CsvTable table;
    table.cols = need_cols;

    std::size_t line_no = 0;
    std::size_t begin = 0;
    bool header_pending = has_header;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        const bool last = end == std::string::npos;
        std::string_view line(text.data() + begin, (last ? text.size() : end) - begin);
        begin = last ? text.size() + 1 : end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (last) break;  // trailing newline
            throw CsvError(prefix + " line " + std::to_string(line_no) + ": blank line");
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto cells = split_line(line);
        if (table.cols == 0) table.cols = cells.size();
        if (cells.size() != table.cols)
            throw CsvError(prefix + " line " + std::to_string(line_no) + ": expected " +
                           std::to_string(table.cols) + " columns, got " +
                           std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string where = prefix + " line " + std::to_string(line_no) +
                                      ", column " + std::to_string(c + 1);
            const double v = parse_cell(cells[c], where);
            if (!std::isfinite(v)) throw CsvError(where + ": non-finite value");
            table.cells.push_back(v);
        }
        ++table.rows;
        if (last) break;
    }
    return table;
}

}  // namespace detail

/// Loads training samples: d coordinate columns followed by one value
/// column, d inferred as columns - 1. Validates the resulting sample set
/// (at least 2 rows, finite entries, pairwise-distinct points).
inline SampleSet load_samples_csv(const std::filesystem::path& path, bool has_header) {
    const detail::CsvTable table = detail::read_numeric_csv(path, has_header);
    const std::string prefix = path.filename().string();
    if (table.rows < 2)
        throw CsvError(prefix + ": need at least 2 data rows, got " + std::to_string(table.rows));
    if (table.cols < 2)
        throw CsvError(prefix + ": need at least 2 columns (coordinates then value), got " +
                       std::to_string(table.cols));
    const std::size_t d = table.cols - 1;
    std::vector<double> points(table.rows * d);
    std::vector<double> values(table.rows);
    for (std::size_t r = 0; r < table.rows; ++r) {
        for (std::size_t c = 0; c < d; ++c) points[r * d + c] = table.cells[r * table.cols + c];
        values[r] = table.cells[r * table.cols + d];
    }
    const std::size_t line_offset = has_header ? 2 : 1;  // data row -> file line
    try {
        return SampleSet(d, std::move(points), std::move(values));
    } catch (const DuplicatePointsError& e) {
        throw CsvError(prefix + ": duplicate points on lines " +
                       std::to_string(e.first + line_offset) + " and " +
                       std::to_string(e.second + line_offset));
    }
}

/// Loads a flat batch of query points with exactly `dim` columns per row.
/// Returns the flat coordinates and the row count; zero rows is legal.
inline std::pair<std::vector<double>, std::size_t> load_points_csv(
    const std::filesystem::path& path, bool has_header, std::size_t dim) {
    detail::CsvTable table = detail::read_numeric_csv(path, has_header, dim);
    return {std::move(table.cells), table.rows};
}

}  // namespace voronet
