#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"

namespace parclass {

// One parsed column. Numeric columns keep parsed doubles in `numbers`,
// categorical columns keep the cell text in `texts`; `missing[i]` marks empty
// cells in either case.
struct RawColumn {
    bool is_numeric = false;
    std::vector<double> numbers;
    std::vector<std::string> texts;
    std::vector<std::uint8_t> missing;

    std::size_t size() const { return missing.size(); }
};

// Tabular data as loaded from disk, before cleaning and encoding.
struct RawTable {
    std::vector<std::string> column_names;
    std::vector<RawColumn> columns;
    std::size_t n_rows = 0;

    std::size_t n_cols() const { return columns.size(); }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t i = 0; i < column_names.size(); ++i) {
            if (column_names[i] == name) return i;
        }
        throw DataError("no column named '" + name + "'");
    }

    RawTable keep_rows(const std::vector<std::size_t>& rows) const {
        RawTable out;
        out.column_names = column_names;
        out.n_rows = rows.size();
        out.columns.reserve(columns.size());
        for (const RawColumn& col : columns) {
            RawColumn c;
            c.is_numeric = col.is_numeric;
            for (std::size_t r : rows) {
                c.missing.push_back(col.missing[r]);
                if (col.is_numeric) {
                    c.numbers.push_back(col.numbers[r]);
                } else {
                    c.texts.push_back(col.texts[r]);
                }
            }
            out.columns.push_back(std::move(c));
        }
        return out;
    }
};

namespace detail {

// Cell equality on the stored representation; missing compares equal to
// missing, doubles compare by bit pattern so NaN cells dedup too.
inline bool cells_equal(const RawColumn& col, std::size_t a, std::size_t b) {
    if (col.missing[a] != col.missing[b]) return false;
    if (col.missing[a]) return true;
    if (col.is_numeric) {
        return std::bit_cast<std::uint64_t>(col.numbers[a]) ==
               std::bit_cast<std::uint64_t>(col.numbers[b]);
    }
    return col.texts[a] == col.texts[b];
}

inline bool rows_equal(const RawTable& t, std::size_t a, std::size_t b) {
    for (const RawColumn& col : t.columns) {
        if (!cells_equal(col, a, b)) return false;
    }
    return true;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

inline std::uint64_t row_hash(const RawTable& t, std::size_t r) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const RawColumn& col : t.columns) {
        if (col.missing[r]) {
            h = hash_combine(h, 0x6d697373ull);  // distinct tag for missing
        } else if (col.is_numeric) {
            h = hash_combine(h, std::bit_cast<std::uint64_t>(col.numbers[r]));
        } else {
            h = hash_combine(h, std::hash<std::string>{}(col.texts[r]));
        }
    }
    return h;
}

}  // namespace detail

// Removes rows that are cell-for-cell identical to an earlier row; first
// occurrence kept, relative order preserved.
inline RawTable drop_duplicates(const RawTable& t) {
    std::vector<std::size_t> keep;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    seen.reserve(t.n_rows);
    for (std::size_t r = 0; r < t.n_rows; ++r) {
        auto& bucket = seen[detail::row_hash(t, r)];
        bool dup = false;
        for (std::size_t prev : bucket) {
            if (detail::rows_equal(t, prev, r)) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            bucket.push_back(r);
            keep.push_back(r);
        }
    }
    return t.keep_rows(keep);
}

// Keeps only rows whose label cell is present. An all-missing label column
// yields an empty table, not an error.
inline RawTable drop_missing_labels(const RawTable& t, const std::string& label_column) {
    const RawColumn& label = t.columns[t.column_index(label_column)];
    std::vector<std::size_t> keep;
    keep.reserve(t.n_rows);
    for (std::size_t r = 0; r < t.n_rows; ++r) {
        if (!label.missing[r]) keep.push_back(r);
    }
    return t.keep_rows(keep);
}

// Fills numeric gaps with the column mean and categorical gaps with the
// column mode (ties to the lexicographically smallest value). Columns with no
// observed value at all are dropped and reported via `dropped_columns`.
inline RawTable impute_missing(const RawTable& t,
                               std::vector<std::string>* dropped_columns = nullptr) {
    RawTable out;
    out.n_rows = t.n_rows;
    for (std::size_t c = 0; c < t.n_cols(); ++c) {
        const RawColumn& col = t.columns[c];
        std::size_t observed = 0;
        for (std::size_t r = 0; r < t.n_rows; ++r) {
            if (!col.missing[r]) ++observed;
        }
        if (observed == 0 && t.n_rows > 0) {
            if (dropped_columns) dropped_columns->push_back(t.column_names[c]);
            continue;
        }
        RawColumn filled = col;
        std::fill(filled.missing.begin(), filled.missing.end(), std::uint8_t{0});
        if (col.is_numeric) {
            double sum = 0.0;
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                if (!col.missing[r]) sum += col.numbers[r];
            }
            const double mean = observed > 0 ? sum / static_cast<double>(observed) : 0.0;
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                if (col.missing[r]) filled.numbers[r] = mean;
            }
        } else {
            std::map<std::string, std::size_t> freq;
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                if (!col.missing[r]) ++freq[col.texts[r]];
            }
            std::string mode;
            std::size_t best = 0;
            for (const auto& [value, count] : freq) {
                if (count > best) {  // map iterates sorted, so ties keep the smallest value
                    best = count;
                    mode = value;
                }
            }
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                if (col.missing[r]) filled.texts[r] = mode;
            }
        }
        out.column_names.push_back(t.column_names[c]);
        out.columns.push_back(std::move(filled));
    }
    return out;
}

// Turns a fully observed table into a Dataset. Categorical feature columns
// become integer codes in sorted-unique-value order; the label column becomes
// class ids 0..n_classes-1, also in sorted-unique-value order.
inline Dataset encode(const RawTable& t, const std::string& label_column) {
    const std::size_t label_idx = t.column_index(label_column);
    for (std::size_t c = 0; c < t.n_cols(); ++c) {
        for (std::size_t r = 0; r < t.n_rows; ++r) {
            if (t.columns[c].missing[r]) {
                throw DataError("encode: column '" + t.column_names[c] +
                                "' still has missing values");
            }
        }
    }

    Dataset d;
    d.x.n_rows = t.n_rows;
    d.x.n_cols = t.n_cols() == 0 ? 0 : t.n_cols() - 1;
    d.x.values.assign(t.n_rows * d.x.n_cols, 0.0);

    std::size_t out_col = 0;
    for (std::size_t c = 0; c < t.n_cols(); ++c) {
        if (c == label_idx) continue;
        const RawColumn& col = t.columns[c];
        d.feature_names.push_back(t.column_names[c]);
        if (col.is_numeric) {
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                d.x.values[r * d.x.n_cols + out_col] = col.numbers[r];
            }
        } else {
            std::vector<std::string> values = col.texts;
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            std::unordered_map<std::string, double> code;
            for (std::size_t i = 0; i < values.size(); ++i) {
                code[values[i]] = static_cast<double>(i);
            }
            for (std::size_t r = 0; r < t.n_rows; ++r) {
                d.x.values[r * d.x.n_cols + out_col] = code[col.texts[r]];
            }
        }
        ++out_col;
    }

    const RawColumn& label = t.columns[label_idx];
    d.labels.resize(t.n_rows);
    if (label.is_numeric) {
        std::vector<double> values = label.numbers;
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.size() < 2) {
            throw DataError("label column '" + label_column +
                            "' has a single class; classification is undefined");
        }
        std::map<double, int> code;
        for (std::size_t i = 0; i < values.size(); ++i) {
            code[values[i]] = static_cast<int>(i);
        }
        for (std::size_t r = 0; r < t.n_rows; ++r) d.labels[r] = code[label.numbers[r]];
        d.n_classes = static_cast<int>(values.size());
    } else {
        std::vector<std::string> values = label.texts;
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        if (values.size() < 2) {
            throw DataError("label column '" + label_column +
                            "' has a single class; classification is undefined");
        }
        std::map<std::string, int> code;
        for (std::size_t i = 0; i < values.size(); ++i) {
            code[values[i]] = static_cast<int>(i);
        }
        for (std::size_t r = 0; r < t.n_rows; ++r) d.labels[r] = code[label.texts[r]];
        d.n_classes = static_cast<int>(values.size());
    }
    return d;
}

}  // namespace parclass
