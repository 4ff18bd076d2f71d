#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "parclass/errors.hpp"
#include "parclass/raw_table.hpp"

namespace parclass {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

// Whole-cell numeric parse; "1.5x" is not a number.
inline bool parse_number(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size();
}

}  // namespace detail

// Parses comma-separated text: first row is the header, empty cell = missing,
// no quoting support. Columns whose every observed cell parses as a number
// are numeric; anything else is categorical. Blank lines are skipped.
inline RawTable parse_csv(std::istream& in, const std::string& label_column) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty input: no header row");
    RawTable t;
    t.column_names = detail::split_cells(line);
    if (t.column_names.empty()) throw DataError("empty header row");

    bool has_label = false;
    for (const std::string& name : t.column_names) has_label |= (name == label_column);
    if (!has_label) throw DataError("header has no column named '" + label_column + "'");

    const std::size_t n_cols = t.column_names.size();
    std::vector<std::vector<std::string>> raw(n_cols);
    std::size_t data_row = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> cells = detail::split_cells(line);
        if (cells.size() != n_cols) {
            throw DataError("data row " + std::to_string(data_row) + ": expected " +
                            std::to_string(n_cols) + " cells, got " +
                            std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < n_cols; ++c) raw[c].push_back(std::move(cells[c]));
        ++data_row;
    }
    t.n_rows = data_row;

    t.columns.resize(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        RawColumn& col = t.columns[c];
        col.missing.resize(t.n_rows, 0);
        bool numeric = true;
        double value = 0.0;
        for (std::size_t r = 0; r < t.n_rows; ++r) {
            if (raw[c][r].empty()) {
                col.missing[r] = 1;
            } else if (!detail::parse_number(raw[c][r], value)) {
                numeric = false;
                break;
            }
        }
        col.is_numeric = numeric;
        if (numeric) {
            col.numbers.resize(t.n_rows, 0.0);
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                if (!col.missing[r]) detail::parse_number(raw[c][r], col.numbers[r]);
            }
        } else {
            std::fill(col.missing.begin(), col.missing.end(), std::uint8_t{0});
            col.texts.resize(t.n_rows);
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                col.missing[r] = raw[c][r].empty() ? 1 : 0;
                col.texts[r] = std::move(raw[c][r]);
            }
        }
    }
    return t;
}

inline RawTable load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return parse_csv(in, label_column);
}

}  // namespace parclass
