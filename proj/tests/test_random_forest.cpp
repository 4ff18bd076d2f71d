#include <doctest.h>

#include "parclass/random_forest.hpp"
#include "parclass/synth.hpp"

using namespace parclass;

TEST_CASE("per-tree seeds follow the mixed schedule") {
    const Dataset d = synth_dataset(SynthSpec{60, 3, 2, 2.0, 1});
    const std::uint64_t seed = 99;
    const RForestModel m = fit_rforest(RForestParams{5, seed, 0}, d);
    REQUIRE(m.per_tree_seeds.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(m.per_tree_seeds[i] == mix_seed(seed, i));
    }
    const RForestModel offset = fit_rforest(RForestParams{3, seed, 2}, d);
    CHECK(offset.per_tree_seeds[0] == mix_seed(seed, 2));
    CHECK(offset.per_tree_seeds[2] == mix_seed(seed, 4));
}

TEST_CASE("forest_merge concatenates 64+66 into a 130-tree model") {
    const Dataset d = synth_dataset(SynthSpec{80, 3, 2, 2.0, 5});
    const RForestModel a = fit_rforest(RForestParams{64, 7, 0}, d);
    const RForestModel b = fit_rforest(RForestParams{66, 7, 64}, d);
    const RForestModel merged = forest_merge({a, b});
    CHECK(merged.trees.size() == 130);
    CHECK(merged.params.n_trees == 130);
    CHECK(merged.per_tree_seeds.size() == 130);
}

TEST_CASE("merging a model with itself leaves predictions unchanged") {
    const Dataset d = synth_dataset(SynthSpec{100, 3, 2, 1.0, 13});
    const Dataset q = synth_dataset(SynthSpec{40, 3, 2, 1.0, 14});
    const RForestModel m = fit_rforest(RForestParams{9, 3, 0}, d);
    const RForestModel doubled = forest_merge({m, m});
    CHECK(rforest_predict(m, q.x) == rforest_predict(doubled, q.x));
}

TEST_CASE("merged 64+66 equals the serial 130-tree forest bit for bit") {
    // Keystone: any partition of the tree range with the shared seed schedule
    // must reproduce the single-model predictions exactly.
    const Dataset train = synth_dataset(SynthSpec{300, 4, 2, 1.5, 21});
    const Dataset test = synth_dataset(SynthSpec{150, 4, 2, 1.5, 22});
    const std::uint64_t seed = 4242;

    const RForestModel serial = fit_rforest(RForestParams{130, seed, 0}, train);
    const RForestModel part_a = fit_rforest(RForestParams{64, seed, 0}, train);
    const RForestModel part_b = fit_rforest(RForestParams{66, seed, 64}, train);
    const RForestModel merged = forest_merge({part_a, part_b});

    CHECK(merged.per_tree_seeds == serial.per_tree_seeds);
    CHECK(rforest_predict(merged, test.x) == rforest_predict(serial, test.x));
    CHECK(rforest_vote_counts(merged, test.x) == rforest_vote_counts(serial, test.x));
}

TEST_CASE("merge equivalence holds for other partitions too") {
    const Dataset train = synth_dataset(SynthSpec{150, 3, 3, 1.0, 8});
    const Dataset test = synth_dataset(SynthSpec{60, 3, 3, 1.0, 9});
    const std::uint64_t seed = 17;
    const RForestModel serial = fit_rforest(RForestParams{12, seed, 0}, train);

    const RForestModel p0 = fit_rforest(RForestParams{3, seed, 0}, train);
    const RForestModel p1 = fit_rforest(RForestParams{4, seed, 3}, train);
    const RForestModel p2 = fit_rforest(RForestParams{5, seed, 7}, train);
    const RForestModel merged = forest_merge({p0, p1, p2});
    CHECK(rforest_predict(merged, test.x) == rforest_predict(serial, test.x));
}

TEST_CASE("forest_merge rejects incompatible feature dimensions") {
    const Dataset d3 = synth_dataset(SynthSpec{50, 3, 2, 2.0, 1});
    const Dataset d4 = synth_dataset(SynthSpec{50, 4, 2, 2.0, 1});
    const RForestModel a = fit_rforest(RForestParams{2, 1, 0}, d3);
    const RForestModel b = fit_rforest(RForestParams{2, 1, 0}, d4);
    CHECK_THROWS_AS(forest_merge({a, b}), DataError);
}

TEST_CASE("fit_rforest is deterministic and vote ties go to the smaller class") {
    const Dataset d = synth_dataset(SynthSpec{80, 2, 2, 0.5, 3});
    const Dataset q = synth_dataset(SynthSpec{30, 2, 2, 0.5, 4});
    const RForestModel a = fit_rforest(RForestParams{10, 5, 0}, d);
    const RForestModel b = fit_rforest(RForestParams{10, 5, 0}, d);
    CHECK(rforest_predict(a, q.x) == rforest_predict(b, q.x));

    // With an even tree count on noisy data, 5-5 vote splits occur; verify
    // the argmax matches the tie rule against the raw counts.
    const auto votes = rforest_vote_counts(a, q.x);
    const auto pred = rforest_predict(a, q.x);
    for (std::size_t r = 0; r < q.n_rows(); ++r) {
        const std::int64_t c0 = votes[r * 2], c1 = votes[r * 2 + 1];
        CHECK(pred[r] == (c1 > c0 ? 1 : 0));
    }
}
