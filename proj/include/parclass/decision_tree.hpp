#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"
#include "parclass/hyperparams.hpp"
#include "parclass/rng.hpp"

namespace parclass {

// Gini impurity 1 - sum((c_i / n)^2).
inline double gini(std::span<const std::size_t> counts) {
    double n = 0.0;
    for (std::size_t c : counts) n += static_cast<double>(c);
    double sum_sq = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / n;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

struct TreeNode {
    int feature = -1;  // split nodes only
    double threshold = 0.0;
    int left = -1;  // child indices; -1 marks a leaf
    int right = -1;
    int class_id = -1;  // leaves only
    std::size_t n_samples = 0;

    bool is_leaf() const { return left < 0; }
};

struct DTreeModel {
    DTreeParams params;
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int n_classes = 0;
    std::size_t n_features = 0;
};

struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
};

// Best (feature, midpoint threshold) by weighted child Gini over the given
// rows, considering only candidate_features. Both children must keep at least
// min_samples_leaf rows and the split must strictly reduce impurity. Ties go
// to the lower feature index, then the lower threshold.
inline std::optional<Split> best_split(const Dataset& data,
                                       std::span<const std::size_t> rows,
                                       std::size_t min_samples_leaf,
                                       std::span<const std::size_t> candidate_features) {
    const std::size_t n = rows.size();
    if (n == 0) throw DataError("best_split: empty row set");
    const std::size_t n_classes = static_cast<std::size_t>(data.n_classes);

    std::vector<std::size_t> parent_counts(n_classes, 0);
    for (std::size_t r : rows) ++parent_counts[static_cast<std::size_t>(data.labels[r])];
    const double parent_gini = gini(parent_counts);

    std::optional<Split> best;
    double best_score = parent_gini;

    std::vector<std::pair<double, int>> sorted(n);  // (value, label)
    std::vector<double> left_counts(n_classes), right_counts(n_classes);

    for (std::size_t f : candidate_features) {
        for (std::size_t i = 0; i < n; ++i) {
            sorted[i] = {data.at(rows[i], f), data.labels[rows[i]]};
        }
        std::sort(sorted.begin(), sorted.end());

        std::fill(left_counts.begin(), left_counts.end(), 0.0);
        for (std::size_t c = 0; c < n_classes; ++c) {
            right_counts[c] = static_cast<double>(parent_counts[c]);
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t cls = static_cast<std::size_t>(sorted[i].second);
            left_counts[cls] += 1.0;
            right_counts[cls] -= 1.0;
            if (sorted[i].first == sorted[i + 1].first) continue;

            const double n_left = static_cast<double>(i + 1);
            const double n_right = static_cast<double>(n - i - 1);
            if (n_left < static_cast<double>(min_samples_leaf) ||
                n_right < static_cast<double>(min_samples_leaf)) {
                continue;
            }
            double left_sq = 0.0, right_sq = 0.0;
            for (std::size_t c = 0; c < n_classes; ++c) {
                left_sq += left_counts[c] * left_counts[c];
                right_sq += right_counts[c] * right_counts[c];
            }
            const double gini_left = 1.0 - left_sq / (n_left * n_left);
            const double gini_right = 1.0 - right_sq / (n_right * n_right);
            const double weighted =
                (n_left * gini_left + n_right * gini_right) / static_cast<double>(n);
            if (weighted < best_score) {
                best_score = weighted;
                best = Split{f, (sorted[i].first + sorted[i + 1].first) / 2.0};
            }
        }
    }
    return best;
}

namespace detail {

struct TreeBuildConfig {
    std::size_t min_samples_leaf = 1;
    std::optional<std::size_t> max_depth;
    std::size_t max_features = 0;  // 0 = consider every feature
    Rng* rng = nullptr;            // required when max_features > 0
};

inline int majority_class(const Dataset& data, std::span<const std::size_t> rows) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(data.n_classes), 0);
    for (std::size_t r : rows) ++counts[static_cast<std::size_t>(data.labels[r])];
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

inline bool is_pure(const Dataset& data, std::span<const std::size_t> rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (data.labels[rows[i]] != data.labels[rows[0]]) return false;
    }
    return true;
}

// Grows one subtree; returns its node index. Children are built left first
// so the node layout is deterministic.
inline int grow_tree(std::vector<TreeNode>& nodes, const Dataset& data,
                     std::vector<std::size_t>& rows, std::size_t depth,
                     const TreeBuildConfig& cfg) {
    const int index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[index].n_samples = rows.size();

    const bool depth_reached = cfg.max_depth && depth >= *cfg.max_depth;
    std::optional<Split> split;
    if (!depth_reached && !is_pure(data, rows)) {
        if (cfg.max_features > 0) {
            std::vector<std::size_t> candidates =
                sample_without_replacement(*cfg.rng, data.n_features(), cfg.max_features);
            std::sort(candidates.begin(), candidates.end());
            split = best_split(data, rows, cfg.min_samples_leaf, candidates);
        } else {
            std::vector<std::size_t> all(data.n_features());
            std::iota(all.begin(), all.end(), std::size_t{0});
            split = best_split(data, rows, cfg.min_samples_leaf, all);
        }
    }
    if (!split) {
        nodes[index].class_id = majority_class(data, rows);
        return index;
    }

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        (data.at(r, split->feature) <= split->threshold ? left_rows : right_rows)
            .push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes[index].feature = static_cast<int>(split->feature);
    nodes[index].threshold = split->threshold;
    const int left = grow_tree(nodes, data, left_rows, depth + 1, cfg);
    const int right = grow_tree(nodes, data, right_rows, depth + 1, cfg);
    nodes[index].left = left;
    nodes[index].right = right;
    return index;
}

inline std::vector<TreeNode> build_tree(const Dataset& data, std::vector<std::size_t> rows,
                                        const TreeBuildConfig& cfg) {
    std::vector<TreeNode> nodes;
    grow_tree(nodes, data, rows, 0, cfg);
    return nodes;
}

}  // namespace detail

inline DTreeModel fit_dtree(const DTreeParams& params, const Dataset& train) {
    if (train.n_rows() == 0) throw DataError("fit_dtree: empty training set");
    if (params.min_samples_leaf < 1) throw DataError("fit_dtree: min_samples_leaf must be >= 1");
    std::vector<std::size_t> rows(train.n_rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    detail::TreeBuildConfig cfg{params.min_samples_leaf, params.max_depth, 0, nullptr};
    return {params, detail::build_tree(train, std::move(rows), cfg), train.n_classes,
            train.n_features()};
}

inline int tree_predict_one(const std::vector<TreeNode>& nodes, std::span<const double> row) {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
        const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
        i = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(i)].class_id;
}

inline std::vector<int> dtree_predict(const DTreeModel& model, const FeatureMatrix& queries) {
    check_predict_dims(model.n_features, queries.n_cols);
    std::vector<int> out(queries.n_rows);
    for (std::size_t r = 0; r < queries.n_rows; ++r) {
        out[r] = tree_predict_one(model.nodes, queries.row(r));
    }
    return out;
}

}  // namespace parclass
