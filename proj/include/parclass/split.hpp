#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"
#include "parclass/rng.hpp"

namespace parclass {

// Deterministic shuffled train/test split: the seeded permutation's first
// floor(train_fraction * n) rows form the training set, the rest the test set.
inline std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double train_fraction,
                                                    std::uint64_t seed) {
    if (d.n_rows() < 2) throw DataError("train_test_split: need at least 2 rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw DataError("train_test_split: train_fraction must be in (0, 1)");
    }
    const std::size_t n = d.n_rows();
    const std::size_t n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n) {
        throw DataError("train_test_split: split would leave an empty part");
    }
    const std::vector<std::size_t> perm = shuffled_indices(n, seed);
    const std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + static_cast<long>(n_train));
    const std::vector<std::size_t> test_idx(perm.begin() + static_cast<long>(n_train), perm.end());
    return {d.subset_rows(train_idx), d.subset_rows(test_idx)};
}

// min(n, n_rows) rows chosen uniformly without replacement, in original row
// order. Asking for at least n_rows returns the dataset unchanged.
inline Dataset random_sample(const Dataset& d, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DataError("random_sample: n must be >= 1");
    if (n >= d.n_rows()) return d;
    std::vector<std::size_t> perm = shuffled_indices(d.n_rows(), seed);
    perm.resize(n);
    std::sort(perm.begin(), perm.end());
    return d.subset_rows(perm);
}

}  // namespace parclass
