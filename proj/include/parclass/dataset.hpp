#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "parclass/errors.hpp"

namespace parclass {

// Dense row-major matrix of feature values.
struct FeatureMatrix {
    std::vector<double> values;  // n_rows * n_cols
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * n_cols, n_cols};
    }
};

// Fully numeric, fully observed data: the unit of train/test input.
// labels[i] is a class id in [0, n_classes).
struct Dataset {
    FeatureMatrix x;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    int n_classes = 0;

    std::size_t n_rows() const { return x.n_rows; }
    std::size_t n_features() const { return x.n_cols; }

    Dataset subset_rows(const std::vector<std::size_t>& rows) const {
        Dataset out;
        out.feature_names = feature_names;
        out.n_classes = n_classes;
        out.x.n_rows = rows.size();
        out.x.n_cols = x.n_cols;
        out.x.values.reserve(rows.size() * x.n_cols);
        out.labels.reserve(rows.size());
        for (std::size_t r : rows) {
            auto row = x.row(r);
            out.x.values.insert(out.x.values.end(), row.begin(), row.end());
            out.labels.push_back(labels[r]);
        }
        return out;
    }

    Dataset select_columns(const std::vector<std::size_t>& cols) const {
        Dataset out;
        out.labels = labels;
        out.n_classes = n_classes;
        out.x.n_rows = x.n_rows;
        out.x.n_cols = cols.size();
        out.x.values.reserve(x.n_rows * cols.size());
        for (std::size_t c : cols) out.feature_names.push_back(feature_names[c]);
        for (std::size_t r = 0; r < x.n_rows; ++r) {
            for (std::size_t c : cols) out.x.values.push_back(at(r, c));
        }
        return out;
    }

    // Copy of one feature column.
    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(x.n_rows);
        for (std::size_t r = 0; r < x.n_rows; ++r) out[r] = at(r, c);
        return out;
    }

    double at(std::size_t r, std::size_t c) const { return x.at(r, c); }
};

inline void check_predict_dims(std::size_t model_features, std::size_t query_cols) {
    if (query_cols != model_features) {
        throw DataError("feature dimension mismatch: model expects " +
                        std::to_string(model_features) + " columns, got " +
                        std::to_string(query_cols));
    }
}

}  // namespace parclass
