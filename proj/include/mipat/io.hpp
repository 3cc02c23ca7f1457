#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mipat/error.hpp"
#include "mipat/linalg.hpp"

namespace mipat::io {

/// A numeric table read from CSV. `header` is empty when the first row was
/// numeric.
struct Table {
    std::vector<std::string> header;
    Matrix values;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline bool parse_double(std::string_view cell, double& out) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return false;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size();
}

} // namespace detail

/**
 * Comma-separated numbers, '.' decimal point, LF or CRLF line ends. Blank
 * lines are skipped. A first row containing any non-numeric cell is taken
 * as a header.
 */
inline Table parse_csv(std::string_view text, std::string_view source = "<input>") {
    const std::string where(source);
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = detail::trim(text.substr(start, nl - start));
        if (!line.empty()) lines.push_back(line);
        start = nl + 1;
    }
    if (lines.empty()) throw invalid_input(where + ": file is empty");

    Table table;
    std::size_t first_data = 0;
    {
        const auto cells = detail::split_commas(lines.front());
        double dummy;
        bool numeric = true;
        for (auto c : cells) numeric = numeric && detail::parse_double(c, dummy);
        if (!numeric) {
            for (auto c : cells) table.header.emplace_back(c);
            first_data = 1;
        }
    }
    if (first_data >= lines.size()) throw invalid_input(where + ": no data rows");

    const std::size_t cols = detail::split_commas(lines[first_data]).size();
    if (!table.header.empty() && table.header.size() != cols)
        throw invalid_input(where + ": header has " + std::to_string(table.header.size()) + " columns but data has " + std::to_string(cols));

    Matrix m(lines.size() - first_data, cols);
    for (std::size_t r = first_data; r < lines.size(); ++r) {
        const auto cells = detail::split_commas(lines[r]);
        if (cells.size() != cols)
            throw invalid_input(where + ": ragged row " + std::to_string(r + 1) + " (" + std::to_string(cells.size()) +
                                " cells, expected " + std::to_string(cols) + ")");
        for (std::size_t c = 0; c < cols; ++c) {
            double v;
            if (!detail::parse_double(cells[c], v))
                throw invalid_input(where + ": non-numeric cell '" + std::string(cells[c]) + "' at row " + std::to_string(r + 1) +
                                    ", column " + std::to_string(c + 1));
            m(r - first_data, c) = v;
        }
    }
    table.values = std::move(m);
    return table;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Table read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

} // namespace mipat::io
