#pragma once

#include <variant>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/decision_tree.hpp"
#include "parclass/hyperparams.hpp"
#include "parclass/knn.hpp"
#include "parclass/random_forest.hpp"
#include "parclass/svm.hpp"

namespace parclass {

using TrainedModel = std::variant<KnnModel, SvmModel, DTreeModel, RForestModel>;

// Uniform fit: deterministic in (params, train).
inline TrainedModel fit(const HyperParams& params, const Dataset& train) {
    struct Visitor {
        const Dataset& train;
        TrainedModel operator()(const KnnParams& p) const { return fit_knn(p, train); }
        TrainedModel operator()(const SvmParams& p) const { return fit_svm_pairwise(p, train); }
        TrainedModel operator()(const DTreeParams& p) const { return fit_dtree(p, train); }
        TrainedModel operator()(const RForestParams& p) const { return fit_rforest(p, train); }
    };
    return std::visit(Visitor{train}, params);
}

inline std::vector<int> predict(const TrainedModel& model, const FeatureMatrix& queries) {
    struct Visitor {
        const FeatureMatrix& q;
        std::vector<int> operator()(const KnnModel& m) const { return knn_predict(m, q); }
        std::vector<int> operator()(const SvmModel& m) const { return svm_predict(m, q); }
        std::vector<int> operator()(const DTreeModel& m) const { return dtree_predict(m, q); }
        std::vector<int> operator()(const RForestModel& m) const { return rforest_predict(m, q); }
    };
    return std::visit(Visitor{queries}, model);
}

}  // namespace parclass
