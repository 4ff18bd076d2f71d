#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"

namespace parclass {

enum class ScoreMethod { chi_squared, anova_f };

// Relevance of one feature to the class labels; higher is stronger.
struct FeatureScore {
    std::string feature_name;
    double statistic = 0.0;
    ScoreMethod method = ScoreMethod::chi_squared;
};

namespace detail {

// Equal-frequency bin edges: edge j is the ceil((j+1)*n/n_bins)-th order
// statistic. A value falls in the first bin whose edge is >= it, so equal
// values always share a bin and heavy ties may leave bins empty.
inline std::vector<double> equal_frequency_edges(std::vector<double> sorted,
                                                 std::size_t n_bins) {
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> edges(n_bins);
    for (std::size_t j = 1; j <= n_bins; ++j) {
        const std::size_t rank = (j * n + n_bins - 1) / n_bins;  // ceil(j*n/n_bins)
        edges[j - 1] = sorted[std::min(n - 1, rank - 1)];
    }
    return edges;
}

inline std::size_t bin_of(const std::vector<double>& edges, double x) {
    return static_cast<std::size_t>(
        std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
}

inline int max_label(std::span<const int> labels) {
    int m = 0;
    for (int l : labels) m = std::max(m, l);
    return m;
}

}  // namespace detail

// Pearson chi-squared statistic of the bin x class contingency table after
// equal-frequency discretization. Cells with zero expected count are skipped.
inline FeatureScore chi_squared_score(std::span<const double> feature,
                                      std::span<const int> labels, std::size_t n_bins,
                                      std::string feature_name = "") {
    if (feature.size() != labels.size() || feature.size() < 2) {
        throw DataError("chi_squared_score: need matching feature/label vectors with >= 2 rows");
    }
    if (n_bins < 2) throw DataError("chi_squared_score: n_bins must be >= 2");

    const std::size_t n = feature.size();
    const std::size_t n_classes = static_cast<std::size_t>(detail::max_label(labels)) + 1;
    const std::vector<double> edges = detail::equal_frequency_edges(
        std::vector<double>(feature.begin(), feature.end()), n_bins);

    std::vector<double> observed(n_bins * n_classes, 0.0);
    std::vector<double> bin_total(n_bins, 0.0);
    std::vector<double> class_total(n_classes, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = detail::bin_of(edges, feature[i]);
        const std::size_t c = static_cast<std::size_t>(labels[i]);
        observed[b * n_classes + c] += 1.0;
        bin_total[b] += 1.0;
        class_total[c] += 1.0;
    }

    double stat = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            const double expected =
                bin_total[b] * class_total[c] / static_cast<double>(n);
            if (expected == 0.0) continue;
            const double diff = observed[b * n_classes + c] - expected;
            stat += diff * diff / expected;
        }
    }
    return {std::move(feature_name), stat, ScoreMethod::chi_squared};
}

// One-way ANOVA F statistic: between-group mean square over within-group mean
// square. Zero within-group variance against nonzero between-group variance is
// reported as the largest finite double, keeping the statistic finite.
inline FeatureScore anova_f_score(std::span<const double> feature,
                                  std::span<const int> labels,
                                  std::string feature_name = "") {
    if (feature.size() != labels.size() || feature.empty()) {
        throw DataError("anova_f_score: need matching non-empty feature/label vectors");
    }
    const std::size_t n = feature.size();
    const std::size_t n_classes = static_cast<std::size_t>(detail::max_label(labels)) + 1;

    std::vector<double> sum(n_classes, 0.0);
    std::vector<std::size_t> count(n_classes, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[static_cast<std::size_t>(labels[i])] += feature[i];
        ++count[static_cast<std::size_t>(labels[i])];
    }
    std::size_t groups = 0;
    double grand_sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (count[c] > 0) ++groups;
        grand_sum += sum[c];
    }
    if (groups < 2) throw DataError("anova_f_score: need at least 2 classes with samples");
    if (n <= groups) throw DataError("anova_f_score: need more samples than classes");

    const double grand_mean = grand_sum / static_cast<double>(n);
    double ss_between = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (count[c] == 0) continue;
        const double mean = sum[c] / static_cast<double>(count[c]);
        ss_between += static_cast<double>(count[c]) * (mean - grand_mean) * (mean - grand_mean);
    }
    double ss_within = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = static_cast<std::size_t>(labels[i]);
        const double mean = sum[c] / static_cast<double>(count[c]);
        ss_within += (feature[i] - mean) * (feature[i] - mean);
    }

    const double ms_between = ss_between / static_cast<double>(groups - 1);
    const double ms_within = ss_within / static_cast<double>(n - groups);
    double f = 0.0;
    if (ms_within > 0.0) {
        f = ms_between / ms_within;
    } else if (ms_between > 0.0) {
        f = std::numeric_limits<double>::max();
    }
    return {std::move(feature_name), f, ScoreMethod::anova_f};
}

// Scores every feature column against the labels.
inline std::vector<FeatureScore> score_all_features(const Dataset& d, ScoreMethod method,
                                                    std::size_t n_bins = 10) {
    std::vector<FeatureScore> scores;
    scores.reserve(d.n_features());
    for (std::size_t c = 0; c < d.n_features(); ++c) {
        const std::vector<double> col = d.column(c);
        scores.push_back(method == ScoreMethod::chi_squared
                             ? chi_squared_score(col, d.labels, n_bins, d.feature_names[c])
                             : anova_f_score(col, d.labels, d.feature_names[c]));
    }
    return scores;
}

namespace detail {

// Pearson r; pairs involving a zero-variance column score 0.
inline double pearson(const Dataset& d, std::size_t a, std::size_t b) {
    const std::size_t n = d.n_rows();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        mean_a += d.at(r, a);
        mean_b += d.at(r, b);
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double da = d.at(r, a) - mean_a;
        const double db = d.at(r, b) - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return 0.0;
    return cov / std::sqrt(var_a * var_b);
}

}  // namespace detail

// Left-to-right scan dropping the later column of every pair with
// |Pearson r| >= threshold; dropped columns are not compared again.
inline Dataset prune_correlated(const Dataset& d, double threshold) {
    if (threshold <= 0.0 || threshold > 1.0) {
        throw DataError("prune_correlated: threshold must be in (0, 1]");
    }
    const std::size_t p = d.n_features();
    std::vector<bool> dropped(p, false);
    for (std::size_t a = 0; a < p; ++a) {
        if (dropped[a]) continue;
        for (std::size_t b = a + 1; b < p; ++b) {
            if (dropped[b]) continue;
            if (std::abs(detail::pearson(d, a, b)) >= threshold) dropped[b] = true;
        }
    }
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < p; ++c) {
        if (!dropped[c]) kept.push_back(c);
    }
    return d.select_columns(kept);
}

// Keeps the top_k features by statistic, descending; ties keep the earlier
// column. Asking for more features than exist keeps everything and warns.
inline Dataset select_features(const Dataset& d, const std::vector<FeatureScore>& scores,
                               std::size_t top_k,
                               std::vector<std::string>* warnings = nullptr) {
    if (top_k < 1) throw DataError("select_features: top_k must be >= 1");
    if (scores.size() != d.n_features()) {
        throw DataError("select_features: need one score per feature column");
    }
    if (top_k >= d.n_features()) {
        if (top_k > d.n_features() && warnings) {
            warnings->push_back("select_features: top_k " + std::to_string(top_k) +
                                " exceeds feature count " + std::to_string(d.n_features()) +
                                "; keeping all");
        }
        std::vector<std::size_t> all(d.n_features());
        std::iota(all.begin(), all.end(), std::size_t{0});
        return d.select_columns(all);
    }
    std::vector<std::size_t> order(d.n_features());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a].statistic > scores[b].statistic;
    });
    std::vector<std::size_t> kept(order.begin(), order.begin() + static_cast<long>(top_k));
    std::sort(kept.begin(), kept.end());  // preserve original column order
    return d.select_columns(kept);
}

}  // namespace parclass
