#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "parclass/csv.hpp"
#include "parclass/ensemble.hpp"
#include "parclass/errors.hpp"
#include "parclass/executor.hpp"
#include "parclass/feature_selection.hpp"
#include "parclass/raw_table.hpp"
#include "parclass/report.hpp"
#include "parclass/rng.hpp"
#include "parclass/split.hpp"

namespace parclass {

enum class Algorithm { knn, svm, dtree, rforest };
enum class ExperimentMode { serial, parallel, both };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::knn: return "knn";
        case Algorithm::svm: return "svm";
        case Algorithm::dtree: return "dtree";
        default: return "rforest";
    }
}

// Exit codes of the experiment driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitRuntimeError = 4;
inline constexpr int kExitEquivalenceViolation = 5;

struct ExperimentConfig {
    std::string data_path;
    std::string label_column;
    Algorithm algo = Algorithm::knn;
    ExperimentMode mode = ExperimentMode::both;

    // Grids; the defaults mirror the study this tool reproduces.
    std::vector<std::size_t> knn_k;  // default 1..20
    DistanceMetric knn_metric = DistanceMetric::euclidean;
    std::vector<SvmKernel> svm_kernels{SvmKernel::sigmoid, SvmKernel::poly, SvmKernel::linear};
    std::size_t svm_sample_cap = 10000;
    std::string dtree_grid = "leaf";                           // "leaf" or "depth"
    std::vector<std::size_t> dtree_leaves{10, 15, 20, 30, 35, 40};
    std::vector<std::size_t> dtree_depths{5, 7, 9, 11, 13, 15};
    std::vector<std::size_t> forest_split{64, 66};

    std::size_t n_workers = 0;  // 0 = logical cores, capped at the group count
    std::size_t n_groups = 0;   // 0 = algorithm default (knn: 5 striped groups)
    std::optional<PlanStrategy> strategy;
    double train_fraction = 0.7;
    std::uint64_t seed = 42;

    // Feature selection; off unless a method is chosen.
    std::optional<ScoreMethod> select_method;
    std::size_t select_top_k = 0;
    std::size_t chi2_bins = 10;
    bool prune = false;
    double prune_threshold = 0.9;

    int positive_class = 1;
    std::string out_dir = "out";
};

namespace detail {

inline void validate(const ExperimentConfig& cfg) {
    if (cfg.data_path.empty()) throw ConfigError("missing data path");
    if (cfg.label_column.empty()) throw ConfigError("missing label column");
    if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must be in (0, 1)");
    }
    switch (cfg.algo) {
        case Algorithm::knn:
            break;  // empty k grid falls back to 1..20
        case Algorithm::svm:
            if (cfg.svm_kernels.empty()) throw ConfigError("empty SVM kernel grid");
            if (cfg.svm_sample_cap < 1) throw ConfigError("svm sample cap must be >= 1");
            break;
        case Algorithm::dtree:
            if (cfg.dtree_grid != "leaf" && cfg.dtree_grid != "depth") {
                throw ConfigError("dtree grid must be 'leaf' or 'depth'");
            }
            if (cfg.dtree_grid == "leaf" && cfg.dtree_leaves.empty()) {
                throw ConfigError("empty dtree leaf grid");
            }
            if (cfg.dtree_grid == "depth" && cfg.dtree_depths.empty()) {
                throw ConfigError("empty dtree depth grid");
            }
            break;
        case Algorithm::rforest:
            if (cfg.forest_split.empty()) throw ConfigError("empty forest tree split");
            for (std::size_t t : cfg.forest_split) {
                if (t < 1) throw ConfigError("forest split entries must be >= 1");
            }
            break;
    }
    if (cfg.select_method && cfg.select_top_k < 1) {
        throw ConfigError("feature selection needs top_k >= 1");
    }
}

inline std::vector<HyperParams> build_grid(const ExperimentConfig& cfg) {
    std::vector<HyperParams> grid;
    switch (cfg.algo) {
        case Algorithm::knn: {
            std::vector<std::size_t> ks = cfg.knn_k;
            if (ks.empty()) {
                for (std::size_t k = 1; k <= 20; ++k) ks.push_back(k);
            }
            for (std::size_t k : ks) grid.push_back(KnnParams{k, cfg.knn_metric});
            break;
        }
        case Algorithm::svm: {
            for (SvmKernel kernel : cfg.svm_kernels) {
                SvmParams p;
                p.kernel = kernel;
                p.gamma = 0.0;  // resolved to 1 / n_features at fit time
                p.sample_cap = cfg.svm_sample_cap;
                p.sample_seed = mix_seed(cfg.seed, 0x5cb5);  // one shared subsample
                grid.push_back(p);
            }
            break;
        }
        case Algorithm::dtree: {
            if (cfg.dtree_grid == "leaf") {
                for (std::size_t leaf : cfg.dtree_leaves) {
                    grid.push_back(DTreeParams{leaf, std::nullopt});
                }
            } else {
                for (std::size_t depth : cfg.dtree_depths) {
                    grid.push_back(DTreeParams{1, depth});
                }
            }
            break;
        }
        case Algorithm::rforest: {
            const std::uint64_t forest_seed = mix_seed(cfg.seed, 0xf07e);
            std::size_t first = 0;
            for (std::size_t trees : cfg.forest_split) {
                grid.push_back(RForestParams{trees, forest_seed, first});
                first += trees;
            }
            break;
        }
    }
    return grid;
}

inline std::size_t default_groups(const ExperimentConfig& cfg, std::size_t grid_size) {
    if (cfg.n_groups > 0) return cfg.n_groups;
    if (cfg.algo == Algorithm::knn) return std::min<std::size_t>(5, grid_size);
    return grid_size;
}

inline PlanStrategy default_strategy(const ExperimentConfig& cfg) {
    if (cfg.strategy) return *cfg.strategy;
    return cfg.algo == Algorithm::knn ? PlanStrategy::striped : PlanStrategy::one_per_group;
}

inline std::size_t resolve_workers(std::size_t requested, std::size_t n_groups) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t cores = hw == 0 ? 1 : static_cast<std::size_t>(hw);
    return std::max<std::size_t>(1, std::min(cores, n_groups));
}

inline void write_plotdata(const BenchmarkReport& report, const std::filesystem::path& dir) {
    {
        std::ofstream out(dir / "plotdata_times.csv");
        out << "config_id,params,serial_fit_seconds,serial_predict_seconds,"
               "parallel_fit_seconds,parallel_predict_seconds\n";
        const auto cell = [](const std::optional<double>& v) {
            return v ? std::to_string(*v) : std::string("");
        };
        for (const ConfigReport& c : report.per_config) {
            out << c.config_id << "," << c.params << "," << cell(c.serial_fit_seconds) << ","
                << cell(c.serial_predict_seconds) << "," << cell(c.parallel_fit_seconds)
                << "," << cell(c.parallel_predict_seconds) << "\n";
        }
    }
    {
        std::ofstream out(dir / "plotdata_metrics.csv");
        out << "config_id,params,accuracy,precision,recall,f1\n";
        for (const ConfigReport& c : report.per_config) {
            out << c.config_id << "," << c.params << "," << c.metrics.accuracy << ","
                << c.metrics.precision << "," << c.metrics.recall << "," << c.metrics.f1
                << "\n";
        }
        const auto ensemble_row = [&](const char* tag, const std::optional<MetricSet>& m) {
            if (!m) return;
            out << tag << ",ensemble," << m->accuracy << "," << m->precision << ","
                << m->recall << "," << m->f1 << "\n";
        };
        ensemble_row("ensemble_serial", report.ensemble_serial);
        ensemble_row("ensemble_parallel", report.ensemble_parallel);
    }
}

}  // namespace detail

// Loads, cleans, encodes, selects, splits.
inline std::pair<Dataset, Dataset> prepare_data(const ExperimentConfig& cfg) {
    RawTable t = load_csv(cfg.data_path, cfg.label_column);
    t = drop_duplicates(t);
    t = drop_missing_labels(t, cfg.label_column);
    std::vector<std::string> dropped;
    t = impute_missing(t, &dropped);
    for (const std::string& name : dropped) {
        std::cerr << "note: dropped all-missing column '" << name << "'\n";
    }
    Dataset d = encode(t, cfg.label_column);

    if (cfg.prune) d = prune_correlated(d, cfg.prune_threshold);
    if (cfg.select_method) {
        const std::vector<FeatureScore> scores =
            score_all_features(d, *cfg.select_method, cfg.chi2_bins);
        std::vector<std::string> warnings;
        d = select_features(d, scores, cfg.select_top_k, &warnings);
        for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    }
    return train_test_split(d, cfg.train_fraction, cfg.seed);
}

struct ExperimentOutput {
    BenchmarkReport report;
    int exit_code = kExitOk;
};

// The full experiment: prepare data, plan the grid, run serial and/or
// parallel, ensemble, score, and write report.json / report.txt /
// plotdata_*.csv into cfg.out_dir.
inline ExperimentOutput run_experiment_impl(const ExperimentConfig& cfg) {
    detail::validate(cfg);

    auto [train, test] = prepare_data(cfg);
    const std::vector<HyperParams> grid = detail::build_grid(cfg);
    const std::size_t n_groups = detail::default_groups(cfg, grid.size());
    const TaskPlan plan = plan_tasks(grid, n_groups, detail::default_strategy(cfg));
    const std::size_t n_workers = detail::resolve_workers(cfg.n_workers, plan.groups.size());

    std::optional<RunOutcome> serial, parallel;
    if (cfg.mode != ExperimentMode::parallel) {
        serial = run_serial(plan, train, test);
    }
    if (cfg.mode != ExperimentMode::serial) {
        parallel = run_parallel(plan, train, test, n_workers);
    }

    const auto make_ensemble = [&](const RunOutcome& outcome) {
        return cfg.algo == Algorithm::rforest
                   ? merge_forest_votes(outcome.results, train.n_classes)
                   : majority_vote(outcome.results, train.n_classes);
    };
    std::optional<EnsembleResult> ensemble_serial, ensemble_parallel;
    if (serial) ensemble_serial = make_ensemble(*serial);
    if (parallel) ensemble_parallel = make_ensemble(*parallel);

    ReportInputs inputs;
    inputs.algorithm = to_string(cfg.algo);
    inputs.dataset = {train.n_rows(), test.n_rows(), train.n_features(), train.n_classes,
                      cfg.seed};
    inputs.n_workers = n_workers;
    inputs.serial = serial ? &*serial : nullptr;
    inputs.parallel = parallel ? &*parallel : nullptr;
    inputs.ensemble_serial = ensemble_serial ? &*ensemble_serial : nullptr;
    inputs.ensemble_parallel = ensemble_parallel ? &*ensemble_parallel : nullptr;
    for (const HyperParams& p : grid) inputs.config_labels.push_back(describe(p));

    const int positive_class =
        cfg.positive_class < train.n_classes ? cfg.positive_class : train.n_classes - 1;
    BenchmarkReport report = build_report(inputs, test.labels, positive_class);

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "report.json");
        out << report_to_json(report).dump(2) << "\n";
    }
    {
        std::ofstream out(dir / "report.txt");
        out << render_text(report);
    }
    detail::write_plotdata(report, dir);

    ExperimentOutput output;
    output.report = std::move(report);
    if (output.report.equivalence_checked && !output.report.equivalence_ok) {
        output.exit_code = kExitEquivalenceViolation;
    }
    return output;
}

// Exit-code wrapper around run_experiment_impl; errors go to stderr.
inline int run_experiment(const ExperimentConfig& cfg) {
    try {
        const ExperimentOutput out = run_experiment_impl(cfg);
        if (out.exit_code == kExitEquivalenceViolation) {
            std::cerr << "error: serial and parallel predictions differ\n";
        }
        return out.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

}  // namespace parclass
