#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"
#include "parclass/hyperparams.hpp"
#include "parclass/model.hpp"

namespace parclass {

// Monotonic wall clock used for every timing measurement.
using Clock = std::chrono::steady_clock;

inline Clock::time_point now_monotonic() { return Clock::now(); }

inline double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

// One hyperparameter configuration to train and evaluate.
struct TaskSpec {
    int config_id = 0;
    HyperParams params;
};

enum class PlanStrategy { one_per_group, striped };

// Configurations assigned to worker groups. Under the striped strategy group
// i holds configs {i, i+G, i+2G, ...}, interleaving cheap and expensive
// configurations across groups.
struct TaskPlan {
    std::vector<std::vector<TaskSpec>> groups;
    PlanStrategy strategy = PlanStrategy::striped;

    std::size_t n_tasks() const {
        std::size_t n = 0;
        for (const auto& g : groups) n += g.size();
        return n;
    }
};

inline TaskPlan plan_tasks(const std::vector<HyperParams>& grid, std::size_t n_groups,
                           PlanStrategy strategy) {
    if (grid.empty()) throw ConfigError("plan_tasks: empty grid");
    if (n_groups < 1) throw ConfigError("plan_tasks: n_groups must be >= 1");
    TaskPlan plan;
    plan.strategy = strategy;
    if (strategy == PlanStrategy::one_per_group) {
        plan.groups.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            plan.groups[i].push_back({static_cast<int>(i), grid[i]});
        }
    } else {
        plan.groups.resize(n_groups);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            plan.groups[i % n_groups].push_back({static_cast<int>(i), grid[i]});
        }
    }
    return plan;
}

// Predictions of one configuration on the test set, plus timing metadata.
// Forest tasks additionally carry per-tree class votes so the final forest
// vote can be merged tree-wise across tasks.
struct ConfigResult {
    int config_id = 0;
    std::vector<int> predictions;
    std::vector<std::int64_t> forest_votes;  // flat n_samples * n_classes; empty otherwise
    double fit_seconds = 0.0;
    double predict_seconds = 0.0;
    std::vector<std::string> warnings;
};

enum class RunMode { serial, parallel };

struct RunOutcome {
    std::vector<ConfigResult> results;  // sorted by config_id, one per planned config
    double wall_seconds = 0.0;
    RunMode mode = RunMode::serial;
    std::size_t n_workers = 1;
};

struct RunOptions {
    // Simulated startup cost charged once per task group inside the worker,
    // standing in for process-creation overhead when studying grouping
    // strategies. Zero by default.
    std::chrono::milliseconds simulated_spawn_cost{0};
};

namespace detail {

inline ConfigResult execute_task(const TaskSpec& spec, const Dataset& train,
                                 const Dataset& test) {
    try {
        ConfigResult result;
        result.config_id = spec.config_id;

        const auto t0 = now_monotonic();
        const TrainedModel model = fit(spec.params, train);
        const auto t1 = now_monotonic();
        result.predictions = predict(model, test.x);
        const auto t2 = now_monotonic();

        result.fit_seconds = seconds_between(t0, t1);
        result.predict_seconds = seconds_between(t1, t2);

        if (const auto* svm = std::get_if<SvmModel>(&model); svm && !svm->converged) {
            result.warnings.push_back("svm did not converge within " +
                                      std::to_string(svm->params.max_epochs) + " epochs");
        }
        if (const auto* forest = std::get_if<RForestModel>(&model)) {
            result.forest_votes = rforest_vote_counts(*forest, test.x);
        }
        return result;
    } catch (const TaskError&) {
        throw;
    } catch (const std::exception& e) {
        throw TaskError(spec.config_id, e.what());
    }
}

inline void sort_and_check_complete(const TaskPlan& plan, std::vector<ConfigResult>& results) {
    std::sort(results.begin(), results.end(),
              [](const ConfigResult& a, const ConfigResult& b) {
                  return a.config_id < b.config_id;
              });
    std::vector<int> expected;
    for (const auto& group : plan.groups) {
        for (const TaskSpec& spec : group) expected.push_back(spec.config_id);
    }
    std::sort(expected.begin(), expected.end());
    bool ok = expected.size() == results.size();
    for (std::size_t i = 0; ok && i < expected.size(); ++i) {
        ok = results[i].config_id == expected[i];
    }
    if (!ok) {
        throw std::logic_error("run produced a result set that does not match the plan");
    }
}

}  // namespace detail

// Executes every task on the calling thread, group by group in plan order.
// wall_seconds spans the first fit through the last predict; ensembling never
// happens inside.
inline RunOutcome run_serial(const TaskPlan& plan, const Dataset& train, const Dataset& test) {
    if (plan.n_tasks() == 0) throw ConfigError("run_serial: empty plan");
    RunOutcome outcome;
    outcome.mode = RunMode::serial;
    outcome.n_workers = 1;

    const auto t0 = now_monotonic();
    for (const auto& group : plan.groups) {
        for (const TaskSpec& spec : group) {
            outcome.results.push_back(detail::execute_task(spec, train, test));
        }
    }
    outcome.wall_seconds = seconds_between(t0, now_monotonic());
    detail::sort_and_check_complete(plan, outcome.results);
    return outcome;
}

// Runs task groups on a pool of up to n_workers threads. Each group is
// executed by exactly one worker; finished ConfigResults land in an
// order-insensitive collection channel and are sorted by config_id afterwards,
// so the outcome is independent of completion order. The wall clock covers
// worker creation through join. A failing task aborts the whole run: remaining
// workers stop at the next task boundary, everything is joined, and the error
// names the config id.
inline RunOutcome run_parallel(const TaskPlan& plan, const Dataset& train, const Dataset& test,
                               std::size_t n_workers, RunOptions options = {}) {
    if (plan.n_tasks() == 0) throw ConfigError("run_parallel: empty plan");
    if (n_workers < 1) throw ConfigError("run_parallel: n_workers must be >= 1");

    const std::size_t n_groups = plan.groups.size();
    const std::size_t pool_size = std::min(n_workers, std::max<std::size_t>(1, n_groups));

    std::vector<ConfigResult> collected;
    std::mutex collect_mutex;
    std::atomic<std::size_t> next_group{0};
    std::atomic<bool> abort{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker_body = [&]() {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::size_t g = next_group.fetch_add(1, std::memory_order_relaxed);
            if (g >= n_groups) break;
            if (options.simulated_spawn_cost.count() > 0) {
                std::this_thread::sleep_for(options.simulated_spawn_cost);
            }
            for (const TaskSpec& spec : plan.groups[g]) {
                if (abort.load(std::memory_order_relaxed)) break;
                try {
                    ConfigResult result = detail::execute_task(spec, train, test);
                    std::lock_guard<std::mutex> lock(collect_mutex);
                    collected.push_back(std::move(result));
                } catch (...) {
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                    }
                    abort.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        }
    };

    RunOutcome outcome;
    outcome.mode = RunMode::parallel;
    outcome.n_workers = pool_size;

    const auto t0 = now_monotonic();
    std::vector<std::thread> workers;
    workers.reserve(pool_size);
    for (std::size_t w = 0; w < pool_size; ++w) workers.emplace_back(worker_body);
    for (std::thread& t : workers) t.join();
    outcome.wall_seconds = seconds_between(t0, now_monotonic());

    if (first_error) std::rethrow_exception(first_error);
    outcome.results = std::move(collected);
    detail::sort_and_check_complete(plan, outcome.results);
    return outcome;
}

}  // namespace parclass
