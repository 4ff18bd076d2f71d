#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"
#include "parclass/hyperparams.hpp"

namespace parclass {

// KNN has no training step: the model is the training set itself.
struct KnnModel {
    KnnParams params;
    FeatureMatrix train_x;
    std::vector<int> train_labels;
    int n_classes = 0;
};

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
};

inline double distance(std::span<const double> a, std::span<const double> b,
                       DistanceMetric metric) {
    double acc = 0.0;
    if (metric == DistanceMetric::euclidean) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

inline KnnModel fit_knn(const KnnParams& params, const Dataset& train) {
    if (train.n_rows() == 0) throw DataError("fit_knn: empty training set");
    if (params.k < 1 || params.k > train.n_rows()) {
        throw DataError("fit_knn: k=" + std::to_string(params.k) +
                        " out of range for " + std::to_string(train.n_rows()) + " rows");
    }
    return {params, train.x, train.labels, train.n_classes};
}

// The k nearest training points, closest first; distance ties keep the lower
// training index.
inline std::vector<Neighbor> knn_neighbors(const KnnModel& model,
                                           std::span<const double> query) {
    check_predict_dims(model.train_x.n_cols, query.size());
    const std::size_t n = model.train_x.n_rows;
    const std::size_t k = model.params.k;
    // Bounded insertion keeps the scan O(n) for small k.
    std::vector<Neighbor> best;
    best.reserve(k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = distance(model.train_x.row(i), query, model.params.metric);
        if (best.size() == k && d >= best.back().distance) continue;
        auto pos = std::upper_bound(best.begin(), best.end(), d,
                                    [](double v, const Neighbor& nb) { return v < nb.distance; });
        best.insert(pos, Neighbor{i, d});
        if (best.size() > k) best.pop_back();
    }
    return best;
}

namespace detail {

// Majority class over counts; ties go to the smallest class id.
inline int argmax_class(std::span<const std::size_t> counts) {
    std::size_t best = 0;
    int cls = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > best) {
            best = counts[c];
            cls = static_cast<int>(c);
        }
    }
    return cls;
}

}  // namespace detail

inline int knn_predict_one(const KnnModel& model, std::span<const double> query) {
    const std::vector<Neighbor> nb = knn_neighbors(model, query);
    std::vector<std::size_t> votes(static_cast<std::size_t>(model.n_classes), 0);
    for (const Neighbor& x : nb) {
        ++votes[static_cast<std::size_t>(model.train_labels[x.index])];
    }
    return detail::argmax_class(votes);
}

inline std::vector<int> knn_predict(const KnnModel& model, const FeatureMatrix& queries) {
    check_predict_dims(model.train_x.n_cols, queries.n_cols);
    std::vector<int> out(queries.n_rows);
    for (std::size_t r = 0; r < queries.n_rows; ++r) {
        out[r] = knn_predict_one(model, queries.row(r));
    }
    return out;
}

}  // namespace parclass
