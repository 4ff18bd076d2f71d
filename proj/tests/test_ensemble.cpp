#include <doctest.h>

#include <algorithm>

#include "parclass/ensemble.hpp"
#include "parclass/rng.hpp"

using namespace parclass;

namespace {

ConfigResult voter(int id, std::vector<int> predictions) {
    ConfigResult r;
    r.config_id = id;
    r.predictions = std::move(predictions);
    return r;
}

// Brute-force majority with smallest-id tie rule, written independently of
// the ensemble module (per-sample tally loop, linear scan argmax).
std::vector<int> vote_oracle(const std::vector<std::vector<int>>& votes, int n_classes) {
    const std::size_t n_samples = votes[0].size();
    std::vector<int> out(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        std::vector<int> tally(static_cast<std::size_t>(n_classes), 0);
        for (const auto& v : votes) ++tally[static_cast<std::size_t>(v[s])];
        int arg = 0;
        for (int c = 1; c < n_classes; ++c) {
            if (tally[static_cast<std::size_t>(c)] > tally[static_cast<std::size_t>(arg)]) {
                arg = c;
            }
        }
        out[s] = arg;
    }
    return out;
}

}  // namespace

TEST_CASE("a single voter passes through unchanged") {
    const auto result = majority_vote({voter(0, {1, 0, 1, 1})}, 2);
    CHECK(result.predictions == std::vector<int>{1, 0, 1, 1});
    CHECK(result.n_voters == 1);
}

TEST_CASE("three agreeing voters produce that class with tally (0,3)") {
    const auto result =
        majority_vote({voter(0, {1}), voter(1, {1}), voter(2, {1})}, 2);
    CHECK(result.predictions == std::vector<int>{1});
    CHECK(result.votes(0, 0) == 0);
    CHECK(result.votes(0, 1) == 3);
    CHECK(result.n_voters == 3);
}

TEST_CASE("a 1-1 split between classes 0 and 1 goes to class 0") {
    const auto result = majority_vote({voter(0, {0}), voter(1, {1})}, 2);
    CHECK(result.predictions == std::vector<int>{0});
}

TEST_CASE("exhaustive 2-voter 2-class patterns match the brute-force oracle") {
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const auto result = majority_vote({voter(0, {a}), voter(1, {b})}, 2);
            CHECK(result.predictions == vote_oracle({{a}, {b}}, 2));
        }
    }
}

TEST_CASE("exhaustive patterns up to 4 voters x 3 classes x 3 samples match the oracle") {
    for (int n_voters = 1; n_voters <= 4; ++n_voters) {
        for (int n_classes = 2; n_classes <= 3; ++n_classes) {
            const int n_samples = 3;
            const int n_cells = n_voters * n_samples;
            long patterns = 1;
            for (int i = 0; i < n_cells; ++i) patterns *= n_classes;
            for (long code = 0; code < patterns; ++code) {
                long rest = code;
                std::vector<std::vector<int>> votes(static_cast<std::size_t>(n_voters),
                                                    std::vector<int>(n_samples));
                std::vector<ConfigResult> results;
                for (int v = 0; v < n_voters; ++v) {
                    for (int s = 0; s < n_samples; ++s) {
                        votes[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)] =
                            static_cast<int>(rest % n_classes);
                        rest /= n_classes;
                    }
                    results.push_back(voter(v, votes[static_cast<std::size_t>(v)]));
                }
                const auto got = majority_vote(results, n_classes);
                REQUIRE(got.predictions == vote_oracle(votes, n_classes));
            }
        }
    }
}

TEST_CASE("shuffling the voter list leaves the result unchanged") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int n_voters = 2 + static_cast<int>(uniform_index(rng, 5));
        const int n_classes = 2 + static_cast<int>(uniform_index(rng, 2));
        std::vector<ConfigResult> results;
        for (int v = 0; v < n_voters; ++v) {
            std::vector<int> preds(6);
            for (int& p : preds) p = static_cast<int>(uniform_index(rng, n_classes));
            results.push_back(voter(v, std::move(preds)));
        }
        const auto base = majority_vote(results, n_classes);

        std::vector<ConfigResult> shuffled;
        for (std::size_t i : shuffled_indices(results.size(), 1000 + trial)) {
            shuffled.push_back(results[i]);
        }
        CHECK(majority_vote(shuffled, n_classes) == base);
    }
}

TEST_CASE("duplicating every voter leaves the predictions unchanged") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n_classes = 2 + static_cast<int>(uniform_index(rng, 2));
        std::vector<ConfigResult> results;
        for (int v = 0; v < 3; ++v) {
            std::vector<int> preds(5);
            for (int& p : preds) p = static_cast<int>(uniform_index(rng, n_classes));
            results.push_back(voter(v, std::move(preds)));
        }
        std::vector<ConfigResult> doubled = results;
        doubled.insert(doubled.end(), results.begin(), results.end());
        CHECK(majority_vote(doubled, n_classes).predictions ==
              majority_vote(results, n_classes).predictions);
    }
}

TEST_CASE("unanimity: agreement on a sample always wins") {
    const auto result = majority_vote(
        {voter(0, {2, 0}), voter(1, {2, 1}), voter(2, {2, 0})}, 3);
    CHECK(result.predictions[0] == 2);
}

TEST_CASE("length mismatches name the offending config id") {
    CHECK_THROWS_WITH_AS(majority_vote({voter(4, {0, 1}), voter(9, {0})}, 2),
                         doctest::Contains("config 9"), DataError);
    CHECK_THROWS_AS(majority_vote({}, 2), DataError);
}

TEST_CASE("vote counts sum to n_voters and predictions attain the row max") {
    Rng rng(11);
    std::vector<ConfigResult> results;
    for (int v = 0; v < 5; ++v) {
        std::vector<int> preds(8);
        for (int& p : preds) p = static_cast<int>(uniform_index(rng, 3));
        results.push_back(voter(v, std::move(preds)));
    }
    const auto result = majority_vote(results, 3);
    for (std::size_t s = 0; s < 8; ++s) {
        std::int64_t sum = 0, best = 0;
        for (int c = 0; c < 3; ++c) {
            sum += result.votes(s, c);
            best = std::max(best, result.votes(s, c));
        }
        CHECK(sum == 5);
        CHECK(result.votes(s, result.predictions[s]) == best);
    }
}

TEST_CASE("merge_forest_votes sums per-tree tallies tree-wise") {
    ConfigResult a = voter(0, {0, 1});
    a.forest_votes = {3, 1, 1, 3};  // 4 trees: sample0 3-1, sample1 1-3
    ConfigResult b = voter(1, {1, 1});
    b.forest_votes = {2, 4, 0, 6};  // 6 trees
    const auto merged = merge_forest_votes({a, b}, 2);
    CHECK(merged.n_voters == 10);
    CHECK(merged.predictions == std::vector<int>{0, 1});  // 5-5 tie -> class 0; 1-9 -> 1
    CHECK(merged.votes(0, 0) == 5);
    CHECK(merged.votes(1, 1) == 9);

    ConfigResult no_votes = voter(2, {0, 0});
    CHECK_THROWS_AS(merge_forest_votes({no_votes}, 2), DataError);
}
