#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace parclass {

enum class DistanceMetric { euclidean, manhattan };
enum class SvmKernel { linear, poly, sigmoid };

struct KnnParams {
    std::size_t k = 5;
    DistanceMetric metric = DistanceMetric::euclidean;
};

struct SvmParams {
    SvmKernel kernel = SvmKernel::linear;
    double c = 1.0;
    int degree = 3;
    double gamma = 1.0;  // callers usually set 1 / n_features
    double coef0 = 0.0;
    // Training sets larger than sample_cap are subsampled with sample_seed
    // before optimization; the cap keeps kernel SVM tractable on large data.
    std::size_t sample_cap = 10000;
    std::uint64_t sample_seed = 0;
    std::size_t max_epochs = 200;  // optimizer pass cap; exceeding it flags non-convergence
};

struct DTreeParams {
    std::size_t min_samples_leaf = 1;
    std::optional<std::size_t> max_depth;  // nullopt = unlimited
};

struct RForestParams {
    std::size_t n_trees = 130;
    std::uint64_t seed = 0;
    // Index of the first tree in the shared seed schedule: tree i is grown
    // from mix_seed(seed, first_tree + i). Lets a forest be split across
    // tasks (e.g. 64 + 66) and merged back bit-identically.
    std::size_t first_tree = 0;
};

using HyperParams = std::variant<KnnParams, SvmParams, DTreeParams, RForestParams>;

inline std::string to_string(DistanceMetric m) {
    return m == DistanceMetric::euclidean ? "euclidean" : "manhattan";
}

inline std::string to_string(SvmKernel k) {
    switch (k) {
        case SvmKernel::linear: return "linear";
        case SvmKernel::poly: return "poly";
        default: return "sigmoid";
    }
}

inline std::string describe(const HyperParams& params) {
    struct Visitor {
        std::string operator()(const KnnParams& p) const {
            return "knn k=" + std::to_string(p.k) + " metric=" + to_string(p.metric);
        }
        std::string operator()(const SvmParams& p) const {
            return "svm kernel=" + to_string(p.kernel) + " c=" + std::to_string(p.c);
        }
        std::string operator()(const DTreeParams& p) const {
            std::string s = "dtree min_samples_leaf=" + std::to_string(p.min_samples_leaf);
            s += p.max_depth ? " max_depth=" + std::to_string(*p.max_depth)
                             : " max_depth=unlimited";
            return s;
        }
        std::string operator()(const RForestParams& p) const {
            return "rforest n_trees=" + std::to_string(p.n_trees) +
                   " first_tree=" + std::to_string(p.first_tree);
        }
    };
    return std::visit(Visitor{}, params);
}

}  // namespace parclass
