#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parclass/errors.hpp"

namespace parclass {

// counts[t][p] = number of samples with true class t predicted as p.
struct ConfusionMatrix {
    std::vector<std::int64_t> counts;  // flat n_classes * n_classes
    int n_classes = 0;

    std::int64_t at(int t, int p) const {
        return counts[static_cast<std::size_t>(t) * static_cast<std::size_t>(n_classes) +
                      static_cast<std::size_t>(p)];
    }
    std::int64_t total() const {
        std::int64_t sum = 0;
        for (std::int64_t c : counts) sum += c;
        return sum;
    }
    ConfusionMatrix transposed() const {
        ConfusionMatrix out;
        out.n_classes = n_classes;
        out.counts.resize(counts.size());
        for (int t = 0; t < n_classes; ++t) {
            for (int p = 0; p < n_classes; ++p) {
                out.counts[static_cast<std::size_t>(p) * static_cast<std::size_t>(n_classes) +
                           static_cast<std::size_t>(t)] = at(t, p);
            }
        }
        return out;
    }
};

inline ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred,
                                 int n_classes) {
    if (truth.size() != pred.size() || truth.empty()) {
        throw DataError("confusion: need equal-length non-empty label vectors");
    }
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(n_classes),
                     0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] < 0 || truth[i] >= n_classes || pred[i] < 0 || pred[i] >= n_classes) {
            throw DataError("confusion: class id out of range at sample " + std::to_string(i));
        }
        ++cm.counts[static_cast<std::size_t>(truth[i]) * static_cast<std::size_t>(n_classes) +
                    static_cast<std::size_t>(pred[i])];
    }
    return cm;
}

// accuracy, precision, recall and F1 w.r.t. a positive class (binary) or
// macro-averaged (3+ classes). 0/0 cases come back as 0 with a warning rather
// than an error so degenerate classifiers survive a benchmark sweep.
struct MetricSet {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    int positive_class = 1;
    std::vector<std::string> warnings;

    bool operator==(const MetricSet&) const = default;
};

namespace detail {

inline double safe_ratio(double num, double den, const std::string& name,
                         std::vector<std::string>& warnings) {
    if (den == 0.0) {
        warnings.push_back("degenerate metric: " + name + " is 0/0, reported as 0");
        return 0.0;
    }
    return num / den;
}

struct PrfTriple {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline PrfTriple prf_for_class(const ConfusionMatrix& cm, int cls,
                               std::vector<std::string>& warnings) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (int other = 0; other < cm.n_classes; ++other) {
        if (other == cls) {
            tp = static_cast<double>(cm.at(cls, cls));
        } else {
            fp += static_cast<double>(cm.at(other, cls));
            fn += static_cast<double>(cm.at(cls, other));
        }
    }
    PrfTriple out;
    const std::string tag = "class " + std::to_string(cls);
    out.precision = safe_ratio(tp, tp + fp, "precision(" + tag + ")", warnings);
    out.recall = safe_ratio(tp, tp + fn, "recall(" + tag + ")", warnings);
    out.f1 = safe_ratio(2.0 * out.precision * out.recall, out.precision + out.recall,
                        "f1(" + tag + ")", warnings);
    return out;
}

}  // namespace detail

inline MetricSet metric_set(const ConfusionMatrix& cm, int positive_class) {
    if (positive_class < 0 || positive_class >= cm.n_classes) {
        throw DataError("metric_set: positive_class out of range");
    }
    MetricSet m;
    m.positive_class = positive_class;
    double trace = 0.0;
    for (int c = 0; c < cm.n_classes; ++c) trace += static_cast<double>(cm.at(c, c));
    m.accuracy = trace / static_cast<double>(cm.total());

    if (cm.n_classes <= 2) {
        const detail::PrfTriple t = detail::prf_for_class(cm, positive_class, m.warnings);
        m.precision = t.precision;
        m.recall = t.recall;
        m.f1 = t.f1;
    } else {
        // Macro average over classes.
        for (int c = 0; c < cm.n_classes; ++c) {
            const detail::PrfTriple t = detail::prf_for_class(cm, c, m.warnings);
            m.precision += t.precision;
            m.recall += t.recall;
            m.f1 += t.f1;
        }
        m.precision /= static_cast<double>(cm.n_classes);
        m.recall /= static_cast<double>(cm.n_classes);
        m.f1 /= static_cast<double>(cm.n_classes);
    }
    return m;
}

}  // namespace parclass
