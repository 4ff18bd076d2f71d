#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parclass/errors.hpp"
#include "parclass/executor.hpp"

namespace parclass {

// Majority-vote combination of per-configuration predictions. vote_counts is
// flat n_samples x n_classes; each row sums to n_voters and predictions[s]
// attains the row maximum.
struct EnsembleResult {
    std::vector<int> predictions;
    std::vector<std::int64_t> vote_counts;
    int n_classes = 0;
    std::size_t n_voters = 0;

    std::int64_t votes(std::size_t sample, int cls) const {
        return vote_counts[sample * static_cast<std::size_t>(n_classes) +
                           static_cast<std::size_t>(cls)];
    }

    bool operator==(const EnsembleResult&) const = default;
};

namespace detail {

inline EnsembleResult argmax_votes(std::vector<std::int64_t> counts, std::size_t n_samples,
                                   int n_classes, std::size_t n_voters) {
    EnsembleResult out;
    out.n_classes = n_classes;
    out.n_voters = n_voters;
    out.predictions.resize(n_samples);
    const std::size_t nc = static_cast<std::size_t>(n_classes);
    for (std::size_t s = 0; s < n_samples; ++s) {
        std::int64_t best = -1;
        int cls = 0;
        for (std::size_t c = 0; c < nc; ++c) {
            if (counts[s * nc + c] > best) {  // strict >, so ties keep the smallest id
                best = counts[s * nc + c];
                cls = static_cast<int>(c);
            }
        }
        out.predictions[s] = cls;
    }
    out.vote_counts = std::move(counts);
    return out;
}

}  // namespace detail

// Per sample, the class predicted by the most configurations; ties go to the
// smallest class id. Independent of the order of `results`.
inline EnsembleResult majority_vote(const std::vector<ConfigResult>& results, int n_classes) {
    if (results.empty()) throw DataError("majority_vote: no results");
    const std::size_t n_samples = results[0].predictions.size();
    const std::size_t nc = static_cast<std::size_t>(n_classes);
    std::vector<std::int64_t> counts(n_samples * nc, 0);
    for (const ConfigResult& r : results) {
        if (r.predictions.size() != n_samples) {
            throw DataError("majority_vote: config " + std::to_string(r.config_id) +
                            " has " + std::to_string(r.predictions.size()) +
                            " predictions, expected " + std::to_string(n_samples));
        }
        for (std::size_t s = 0; s < n_samples; ++s) {
            const int cls = r.predictions[s];
            if (cls < 0 || cls >= n_classes) {
                throw DataError("majority_vote: config " + std::to_string(r.config_id) +
                                " predicted class " + std::to_string(cls) +
                                " outside 0.." + std::to_string(n_classes - 1));
            }
            ++counts[s * nc + static_cast<std::size_t>(cls)];
        }
    }
    return detail::argmax_votes(std::move(counts), n_samples, n_classes, results.size());
}

// Tree-wise combination for forest tasks: sums the per-tree class votes each
// task carried, then takes one forest-level argmax. Equivalent to merging the
// sub-forests into a single model and voting over all trees. n_voters is the
// total tree count.
inline EnsembleResult merge_forest_votes(const std::vector<ConfigResult>& results,
                                         int n_classes) {
    if (results.empty()) throw DataError("merge_forest_votes: no results");
    const std::size_t n_samples = results[0].predictions.size();
    const std::size_t nc = static_cast<std::size_t>(n_classes);
    std::vector<std::int64_t> counts(n_samples * nc, 0);
    std::size_t total_trees = 0;
    for (const ConfigResult& r : results) {
        if (r.forest_votes.size() != n_samples * nc) {
            throw DataError("merge_forest_votes: config " + std::to_string(r.config_id) +
                            " carries no tree votes for " + std::to_string(n_samples) +
                            " samples");
        }
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += r.forest_votes[i];
    }
    for (std::size_t c = 0; c < nc && n_samples > 0; ++c) {
        total_trees += static_cast<std::size_t>(counts[c]);
    }
    return detail::argmax_votes(std::move(counts), n_samples, n_classes, total_trees);
}

}  // namespace parclass
