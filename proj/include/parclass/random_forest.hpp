#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/decision_tree.hpp"
#include "parclass/errors.hpp"
#include "parclass/hyperparams.hpp"
#include "parclass/rng.hpp"

namespace parclass {

struct RForestModel {
    RForestParams params;
    std::vector<std::vector<TreeNode>> trees;
    std::vector<std::uint64_t> per_tree_seeds;
    int n_classes = 0;
    std::size_t n_features = 0;
};

// Breiman-style forest: each tree is grown fully (min_samples_leaf = 1, no
// depth cap) on a bootstrap sample of n rows, with floor(sqrt(n_features))
// candidate features per split. All per-tree randomness comes from
// mix_seed(seed, first_tree + i), so any partition of the tree range trains
// bit-identical trees.
inline RForestModel fit_rforest(const RForestParams& params, const Dataset& train) {
    if (train.n_rows() == 0) throw DataError("fit_rforest: empty training set");
    if (params.n_trees < 1) throw DataError("fit_rforest: n_trees must be >= 1");

    const std::size_t n = train.n_rows();
    const std::size_t max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(train.n_features())))));

    RForestModel model;
    model.params = params;
    model.n_classes = train.n_classes;
    model.n_features = train.n_features();
    model.trees.reserve(params.n_trees);
    model.per_tree_seeds.reserve(params.n_trees);

    for (std::size_t i = 0; i < params.n_trees; ++i) {
        const std::uint64_t tree_seed = mix_seed(params.seed, params.first_tree + i);
        Rng rng(tree_seed);
        std::vector<std::size_t> bootstrap(n);
        for (std::size_t r = 0; r < n; ++r) bootstrap[r] = uniform_index(rng, n);
        detail::TreeBuildConfig cfg{1, std::nullopt, max_features, &rng};
        model.trees.push_back(detail::build_tree(train, std::move(bootstrap), cfg));
        model.per_tree_seeds.push_back(tree_seed);
    }
    return model;
}

// Concatenates the tree lists of independently trained forest parts.
inline RForestModel forest_merge(const std::vector<RForestModel>& parts) {
    if (parts.empty()) throw DataError("forest_merge: no parts");
    RForestModel merged;
    merged.n_classes = parts[0].n_classes;
    merged.n_features = parts[0].n_features;
    merged.params = parts[0].params;
    for (const RForestModel& part : parts) {
        if (part.n_features != merged.n_features || part.n_classes != merged.n_classes) {
            throw DataError("forest_merge: incompatible feature dimensions");
        }
        merged.trees.insert(merged.trees.end(), part.trees.begin(), part.trees.end());
        merged.per_tree_seeds.insert(merged.per_tree_seeds.end(), part.per_tree_seeds.begin(),
                                     part.per_tree_seeds.end());
    }
    merged.params.n_trees = merged.trees.size();
    merged.params.first_tree = parts[0].params.first_tree;
    return merged;
}

// Per-class tree votes for every query row, flattened n_rows x n_classes.
inline std::vector<std::int64_t> rforest_vote_counts(const RForestModel& model,
                                                     const FeatureMatrix& queries) {
    check_predict_dims(model.n_features, queries.n_cols);
    const std::size_t nc = static_cast<std::size_t>(model.n_classes);
    std::vector<std::int64_t> votes(queries.n_rows * nc, 0);
    for (const std::vector<TreeNode>& tree : model.trees) {
        for (std::size_t r = 0; r < queries.n_rows; ++r) {
            const int cls = tree_predict_one(tree, queries.row(r));
            ++votes[r * nc + static_cast<std::size_t>(cls)];
        }
    }
    return votes;
}

// Majority vote over trees; ties go to the smallest class id.
inline std::vector<int> rforest_predict(const RForestModel& model,
                                        const FeatureMatrix& queries) {
    const std::vector<std::int64_t> votes = rforest_vote_counts(model, queries);
    const std::size_t nc = static_cast<std::size_t>(model.n_classes);
    std::vector<int> out(queries.n_rows);
    for (std::size_t r = 0; r < queries.n_rows; ++r) {
        std::int64_t best = -1;
        int cls = 0;
        for (std::size_t c = 0; c < nc; ++c) {
            if (votes[r * nc + c] > best) {
                best = votes[r * nc + c];
                cls = static_cast<int>(c);
            }
        }
        out[r] = cls;
    }
    return out;
}

}  // namespace parclass
