#include <doctest.h>

#include <chrono>
#include <set>
#include <thread>

#include "parclass/executor.hpp"
#include "parclass/split.hpp"
#include "parclass/synth.hpp"

using namespace parclass;

namespace {

std::vector<HyperParams> knn_grid(std::size_t k_max) {
    std::vector<HyperParams> grid;
    for (std::size_t k = 1; k <= k_max; ++k) {
        grid.push_back(KnnParams{k, DistanceMetric::euclidean});
    }
    return grid;
}

std::vector<int> config_ids(const TaskPlan& plan, std::size_t group) {
    std::vector<int> ids;
    for (const TaskSpec& t : plan.groups[group]) ids.push_back(t.config_id);
    return ids;
}

}  // namespace

TEST_CASE("striped plan groups k=1..20 into 5 stripes") {
    const TaskPlan plan = plan_tasks(knn_grid(20), 5, PlanStrategy::striped);
    REQUIRE(plan.groups.size() == 5);
    // Config ids 0,5,10,15 hold k values 1,6,11,16.
    CHECK(config_ids(plan, 0) == std::vector<int>{0, 5, 10, 15});
    CHECK(config_ids(plan, 4) == std::vector<int>{4, 9, 14, 19});
    for (const auto& group : plan.groups) {
        for (const TaskSpec& t : group) {
            const auto& p = std::get<KnnParams>(t.params);
            CHECK(p.k == static_cast<std::size_t>(t.config_id) + 1);
        }
    }
}

TEST_CASE("single striped group carries the whole grid in order") {
    const TaskPlan plan = plan_tasks(knn_grid(6), 1, PlanStrategy::striped);
    REQUIRE(plan.groups.size() == 1);
    CHECK(config_ids(plan, 0) == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("7 configs over 3 striped groups partition with sizes {3,2,2}") {
    const TaskPlan plan = plan_tasks(knn_grid(7), 3, PlanStrategy::striped);
    REQUIRE(plan.groups.size() == 3);
    CHECK(plan.groups[0].size() == 3);
    CHECK(plan.groups[1].size() == 2);
    CHECK(plan.groups[2].size() == 2);
    // Enumeration oracle: every id exactly once, stripe rule holds.
    std::set<int> seen;
    for (std::size_t g = 0; g < 3; ++g) {
        for (std::size_t j = 0; j < plan.groups[g].size(); ++j) {
            const int id = plan.groups[g][j].config_id;
            CHECK(static_cast<std::size_t>(id) == g + 3 * j);
            CHECK(seen.insert(id).second);
        }
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("striped group sizes never differ by more than one") {
    for (std::size_t n_configs = 1; n_configs <= 23; ++n_configs) {
        for (std::size_t n_groups = 1; n_groups <= 7; ++n_groups) {
            const TaskPlan plan = plan_tasks(knn_grid(n_configs), n_groups,
                                             PlanStrategy::striped);
            std::size_t lo = SIZE_MAX, hi = 0, total = 0;
            for (const auto& g : plan.groups) {
                lo = std::min(lo, g.size());
                hi = std::max(hi, g.size());
                total += g.size();
            }
            CHECK(hi - lo <= 1);
            CHECK(total == n_configs);
        }
    }
}

TEST_CASE("one_per_group gives each config its own group") {
    const TaskPlan plan = plan_tasks(knn_grid(4), 9, PlanStrategy::one_per_group);
    REQUIRE(plan.groups.size() == 4);
    for (std::size_t g = 0; g < 4; ++g) {
        REQUIRE(plan.groups[g].size() == 1);
        CHECK(plan.groups[g][0].config_id == static_cast<int>(g));
    }
}

TEST_CASE("run_serial executes one trivial task") {
    const Dataset train = synth_dataset(SynthSpec{40, 2, 2, 3.0, 1});
    const Dataset test = synth_dataset(SynthSpec{10, 2, 2, 3.0, 2});
    const TaskPlan plan = plan_tasks(knn_grid(1), 1, PlanStrategy::striped);
    const RunOutcome out = run_serial(plan, train, test);
    CHECK(out.results.size() == 1);
    CHECK(out.results[0].predictions.size() == 10);
    CHECK(out.mode == RunMode::serial);
}

TEST_CASE("serial wall time covers the per-task times") {
    const Dataset train = synth_dataset(SynthSpec{200, 3, 2, 2.0, 3});
    const Dataset test = synth_dataset(SynthSpec{60, 3, 2, 2.0, 4});
    const RunOutcome out =
        run_serial(plan_tasks(knn_grid(5), 2, PlanStrategy::striped), train, test);
    double task_total = 0.0;
    for (const ConfigResult& r : out.results) {
        CHECK(r.fit_seconds >= 0.0);
        CHECK(r.predict_seconds >= 0.0);
        task_total += r.fit_seconds + r.predict_seconds;
    }
    CHECK(out.wall_seconds >= task_total - 1e-3);
}

TEST_CASE("parallel equals serial for any worker count") {
    const Dataset train = synth_dataset(SynthSpec{150, 3, 2, 1.5, 5});
    const Dataset test = synth_dataset(SynthSpec{50, 3, 2, 1.5, 6});
    const TaskPlan plan = plan_tasks(knn_grid(8), 3, PlanStrategy::striped);
    const RunOutcome serial = run_serial(plan, train, test);
    for (const std::size_t workers : {std::size_t{1}, std::size_t{2}, std::size_t{4}}) {
        const RunOutcome parallel = run_parallel(plan, train, test, workers);
        REQUIRE(parallel.results.size() == serial.results.size());
        for (std::size_t i = 0; i < serial.results.size(); ++i) {
            CHECK(parallel.results[i].config_id == serial.results[i].config_id);
            CHECK(parallel.results[i].predictions == serial.results[i].predictions);
        }
    }
}

TEST_CASE("results arrive sorted and complete regardless of completion order") {
    const Dataset train = synth_dataset(SynthSpec{60, 2, 2, 2.0, 7});
    const Dataset test = synth_dataset(SynthSpec{20, 2, 2, 2.0, 8});
    // Many single-task groups with a simulated spawn delay scramble the
    // completion order across two workers.
    const TaskPlan plan = plan_tasks(knn_grid(12), 12, PlanStrategy::one_per_group);
    RunOptions options;
    options.simulated_spawn_cost = std::chrono::milliseconds(1);
    const RunOutcome out = run_parallel(plan, train, test, 2, options);
    REQUIRE(out.results.size() == 12);
    for (std::size_t i = 0; i < out.results.size(); ++i) {
        CHECK(out.results[i].config_id == static_cast<int>(i));
    }
}

TEST_CASE("a failing task aborts the run and names its config id") {
    const Dataset train = synth_dataset(SynthSpec{10, 2, 2, 2.0, 9});
    const Dataset test = synth_dataset(SynthSpec{5, 2, 2, 2.0, 10});
    std::vector<HyperParams> grid = knn_grid(3);
    grid.push_back(KnnParams{100, DistanceMetric::euclidean});  // k > n_rows

    const TaskPlan serial_plan = plan_tasks(grid, 1, PlanStrategy::striped);
    CHECK_THROWS_AS(run_serial(serial_plan, train, test), TaskError);
    try {
        run_parallel(plan_tasks(grid, 2, PlanStrategy::striped), train, test, 2);
        FAIL("expected TaskError");
    } catch (const TaskError& e) {
        CHECK(e.config_id == 3);
    }
}

TEST_CASE("empty plans and zero workers are rejected") {
    CHECK_THROWS_AS(plan_tasks({}, 2, PlanStrategy::striped), ConfigError);
    const Dataset train = synth_dataset(SynthSpec{10, 2, 2, 2.0, 11});
    const TaskPlan plan = plan_tasks(knn_grid(2), 1, PlanStrategy::striped);
    CHECK_THROWS_AS(run_parallel(plan, train, train, 0), ConfigError);
}

TEST_CASE("now_monotonic is non-decreasing and tracks sleeps") {
    const auto t1 = now_monotonic();
    const auto t2 = now_monotonic();
    CHECK(seconds_between(t1, t2) >= 0.0);

    const auto t3 = now_monotonic();
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    const double elapsed = seconds_between(t3, now_monotonic());
    CHECK(elapsed >= 0.1);
    CHECK(elapsed < 1.0);  // generous scheduler slack
}
