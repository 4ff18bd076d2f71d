// Command-line front end: run experiments, generate synthetic data, re-render
// stored reports.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parclass/pipeline.hpp"
#include "parclass/synth.hpp"

namespace {

using namespace parclass;

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            const long v = std::stol(item);
            if (v < 1) throw std::invalid_argument("non-positive");
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw ConfigError("malformed " + what + " entry: '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty " + what);
    return out;
}

// --grid is algorithm specific: knn "1,2,...,20"; svm "sigmoid,poly,linear";
// dtree "leaf:10,15,..." or "depth:5,7,..."; rforest "64,66".
void apply_grid(ExperimentConfig& cfg, const std::string& grid) {
    switch (cfg.algo) {
        case Algorithm::knn:
            cfg.knn_k = parse_size_list(grid, "k grid");
            break;
        case Algorithm::svm: {
            cfg.svm_kernels.clear();
            std::stringstream ss(grid);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item == "linear") {
                    cfg.svm_kernels.push_back(SvmKernel::linear);
                } else if (item == "poly") {
                    cfg.svm_kernels.push_back(SvmKernel::poly);
                } else if (item == "sigmoid") {
                    cfg.svm_kernels.push_back(SvmKernel::sigmoid);
                } else {
                    throw ConfigError("unknown SVM kernel: '" + item + "'");
                }
            }
            break;
        }
        case Algorithm::dtree: {
            const auto colon = grid.find(':');
            std::string param = "leaf", values = grid;
            if (colon != std::string::npos) {
                param = grid.substr(0, colon);
                values = grid.substr(colon + 1);
            }
            if (param != "leaf" && param != "depth") {
                throw ConfigError("dtree grid must look like 'leaf:10,15' or 'depth:5,7'");
            }
            cfg.dtree_grid = param;
            auto list = parse_size_list(values, "dtree grid");
            (param == "leaf" ? cfg.dtree_leaves : cfg.dtree_depths) = std::move(list);
            break;
        }
        case Algorithm::rforest:
            cfg.forest_split = parse_size_list(grid, "tree split");
            break;
    }
}

void apply_select_features(ExperimentConfig& cfg, const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw ConfigError("--select-features expects METHOD:K, e.g. chi2:8");
    }
    const std::string method = spec.substr(0, colon);
    if (method == "chi2") {
        cfg.select_method = ScoreMethod::chi_squared;
    } else if (method == "anova") {
        cfg.select_method = ScoreMethod::anova_f;
    } else {
        throw ConfigError("unknown feature-selection method: '" + method + "'");
    }
    try {
        const long k = std::stol(spec.substr(colon + 1));
        if (k < 1) throw std::invalid_argument("non-positive");
        cfg.select_top_k = static_cast<std::size_t>(k);
    } catch (const std::exception&) {
        throw ConfigError("malformed top-k in --select-features: '" + spec + "'");
    }
}

int cmd_run(const ExperimentConfig& cfg) { return run_experiment(cfg); }

int cmd_synth(const SynthSpec& spec, const std::string& out_path,
              const std::string& label_column) {
    try {
        write_csv(synth_dataset(spec), out_path, label_column);
        std::cout << "wrote " << spec.n_rows << " rows x " << spec.n_features
                  << " features to " << out_path << "\n";
        return kExitOk;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

int cmd_report(const std::string& path) {
    try {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open report: " + path);
        nlohmann::json j;
        in >> j;
        std::cout << render_text(report_from_json(j));
        return kExitOk;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parallel hyperparameter search with majority-vote ensembling"};
    app.require_subcommand(1);
    // Option values come from flags first, then the INI file, then defaults;
    // unknown config keys are rejected. Keys live in a [run] section.
    app.set_config("--config", "", "read option defaults from an INI file");
    app.fallthrough();
    app.allow_config_extras(false);

    // run ---------------------------------------------------------------
    auto* run = app.add_subcommand("run", "run a serial/parallel benchmark experiment");
    ExperimentConfig cfg;
    std::string algo = "knn", mode = "both", strategy, grid, select, trees;
    run->add_option("--data", cfg.data_path, "input CSV")->required();
    run->add_option("--label", cfg.label_column, "label column name")->required();
    run->add_option("--algo", algo, "knn|svm|dtree|rforest")
        ->check(CLI::IsMember({"knn", "svm", "dtree", "rforest"}));
    run->add_option("--grid", grid, "algorithm-specific grid specification");
    run->add_option("--trees", trees, "rforest tree split, e.g. 64,66");
    run->add_option("--metric", cfg.knn_metric,
                    "knn distance metric: euclidean|manhattan")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, DistanceMetric>{{"euclidean", DistanceMetric::euclidean},
                                                  {"manhattan", DistanceMetric::manhattan}}));
    run->add_option("--workers", cfg.n_workers, "worker count (0 = logical cores)");
    run->add_option("--groups", cfg.n_groups, "task group count (0 = algorithm default)");
    run->add_option("--strategy", strategy, "striped|one-per-group");
    run->add_option("--mode", mode, "serial|parallel|both")
        ->check(CLI::IsMember({"serial", "parallel", "both"}));
    run->add_option("--train-fraction", cfg.train_fraction, "training fraction in (0,1)");
    run->add_option("--seed", cfg.seed, "experiment seed (fixed default for reproducibility)");
    run->add_option("--svm-sample", cfg.svm_sample_cap,
                    "training row cap for SVM; larger sets are subsampled");
    run->add_option("--select-features", select, "feature selection METHOD:K (chi2|anova)");
    run->add_option("--bins", cfg.chi2_bins, "equal-frequency bins for chi2 scoring");
    run->add_flag("--prune", cfg.prune, "drop one of each highly correlated feature pair");
    run->add_option("--prune-threshold", cfg.prune_threshold,
                    "absolute Pearson r that counts as highly correlated");
    run->add_option("--positive-class", cfg.positive_class,
                    "class id treated as positive for precision/recall");
    run->add_option("--out", cfg.out_dir, "output directory");

    // synth -------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic blob dataset CSV");
    SynthSpec spec;
    std::string synth_out = "synth.csv", synth_label = "label";
    synth->add_option("--rows", spec.n_rows, "row count");
    synth->add_option("--features", spec.n_features, "feature count");
    synth->add_option("--classes", spec.n_classes, "class count");
    synth->add_option("--separation", spec.class_separation,
                      "distance between consecutive class centroids");
    synth->add_option("--seed", spec.seed, "generator seed");
    synth->add_option("--label-name", synth_label, "label column name");
    synth->add_option("--out", synth_out, "output CSV path");

    // report ------------------------------------------------------------
    auto* report = app.add_subcommand("report", "re-render a stored report.json as text");
    std::string report_path;
    report->add_option("path", report_path, "path to report.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parclass::kExitConfigError;
    }

    try {
        if (run->parsed()) {
            cfg.algo = algo == "knn"     ? Algorithm::knn
                       : algo == "svm"   ? Algorithm::svm
                       : algo == "dtree" ? Algorithm::dtree
                                         : Algorithm::rforest;
            cfg.mode = mode == "serial"     ? ExperimentMode::serial
                       : mode == "parallel" ? ExperimentMode::parallel
                                            : ExperimentMode::both;
            if (!strategy.empty()) {
                if (strategy == "striped") {
                    cfg.strategy = PlanStrategy::striped;
                } else if (strategy == "one-per-group") {
                    cfg.strategy = PlanStrategy::one_per_group;
                } else {
                    throw ConfigError("unknown strategy: '" + strategy + "'");
                }
            }
            if (!trees.empty()) {
                if (cfg.algo != Algorithm::rforest) {
                    throw ConfigError("--trees only applies to --algo rforest");
                }
                cfg.forest_split = parse_size_list(trees, "tree split");
            }
            if (!grid.empty()) apply_grid(cfg, grid);
            if (!select.empty()) apply_select_features(cfg, select);
            return cmd_run(cfg);
        }
        if (synth->parsed()) return cmd_synth(spec, synth_out, synth_label);
        return cmd_report(report_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return parclass::kExitConfigError;
    }
}
