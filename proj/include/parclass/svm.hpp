#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"
#include "parclass/hyperparams.hpp"
#include "parclass/split.hpp"

namespace parclass {

inline double kernel_value(const SvmParams& p, std::span<const double> a,
                           std::span<const double> b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    switch (p.kernel) {
        case SvmKernel::linear: return dot;
        case SvmKernel::poly: return std::pow(p.gamma * dot + p.coef0, p.degree);
        default: return std::tanh(p.gamma * dot + p.coef0);
    }
}

// One binary soft-margin machine for a class pair. Decision value
// f(x) = sum_i coef_i * K(sv_i, x) + bias; f > 0 votes class_hi, otherwise
// class_lo (so exact-zero ties fall to the smaller class id).
struct SvmBinaryModel {
    int class_lo = 0;
    int class_hi = 1;
    FeatureMatrix support_vectors;
    std::vector<double> coefs;  // alpha_i * y_i
    double bias = 0.0;
    bool converged = true;
};

struct SvmModel {
    SvmParams params;  // gamma resolved to its fitted value
    std::vector<SvmBinaryModel> pairs;
    int n_classes = 0;
    std::size_t n_features = 0;
    bool converged = true;
};

namespace detail {

// Platt's sequential minimal optimization with deterministic working-pair
// heuristics: random starting points are replaced by scans from i2+1 so
// repeated fits are bit-identical.
class SmoSolver {
public:
    SmoSolver(const FeatureMatrix& x, const std::vector<double>& y, const SvmParams& p)
        : x_(x), y_(y), p_(p), n_(y.size()), alpha_(y.size(), 0.0), error_(y.size()) {
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];  // f == 0 initially
    }

    // Returns false if the epoch cap was hit before reaching KKT tolerance.
    bool solve() {
        std::size_t num_changed = 0;
        bool examine_all = true;
        std::size_t epochs = 0;
        while (num_changed > 0 || examine_all) {
            if (++epochs > p_.max_epochs) return false;
            num_changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (examine_all || (alpha_[i] > 0.0 && alpha_[i] < p_.c)) {
                    num_changed += examine_example(i) ? 1 : 0;
                }
            }
            if (examine_all) {
                examine_all = false;
            } else if (num_changed == 0) {
                examine_all = true;
            }
        }
        return true;
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double bias() const { return bias_; }

private:
    static constexpr double kKktTol = 1e-3;
    static constexpr double kStepEps = 1e-3;

    double kernel(std::size_t i, std::size_t j) const {
        return kernel_value(p_, x_.row(i), x_.row(j));
    }

    bool examine_example(std::size_t i2) {
        const double y2 = y_[i2];
        const double alph2 = alpha_[i2];
        const double e2 = error_[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -kKktTol && alph2 < p_.c) || (r2 > kKktTol && alph2 > 0.0))) {
            return false;
        }
        // Second-choice heuristic: the non-bound point with the largest |E1-E2|.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t k = 0; k < n_; ++k) {
            if (alpha_[k] <= 0.0 || alpha_[k] >= p_.c) continue;
            const double gap = std::abs(error_[k] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = k;
            }
        }
        if (best < n_ && take_step(best, i2)) return true;
        for (std::size_t off = 1; off <= n_; ++off) {
            const std::size_t k = (i2 + off) % n_;
            if (alpha_[k] > 0.0 && alpha_[k] < p_.c && take_step(k, i2)) return true;
        }
        for (std::size_t off = 1; off <= n_; ++off) {
            const std::size_t k = (i2 + off) % n_;
            if (take_step(k, i2)) return true;
        }
        return false;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double alph1 = alpha_[i1], alph2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = error_[i1], e2 = error_[i2];
        const double s = y1 * y2;
        const double c = p_.c;

        double low, high;
        if (y1 != y2) {
            low = std::max(0.0, alph2 - alph1);
            high = std::min(c, c + alph2 - alph1);
        } else {
            low = std::max(0.0, alph1 + alph2 - c);
            high = std::min(c, alph1 + alph2);
        }
        if (low >= high) return false;

        const double k11 = kernel(i1, i1);
        const double k12 = kernel(i1, i2);
        const double k22 = kernel(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2;
        if (eta > 0.0) {
            a2 = alph2 + y2 * (e1 - e2) / eta;
            a2 = std::min(high, std::max(low, a2));
        } else {
            // Indefinite kernel direction: evaluate the objective at both ends.
            const double f1 = y1 * (e1 + bias_) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 + bias_) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - low);
            const double h1 = alph1 + s * (alph2 - high);
            const double obj_low = l1 * f1 + low * f2 + 0.5 * l1 * l1 * k11 +
                                   0.5 * low * low * k22 + s * low * l1 * k12;
            const double obj_high = h1 * f1 + high * f2 + 0.5 * h1 * h1 * k11 +
                                    0.5 * high * high * k22 + s * high * h1 * k12;
            if (obj_low < obj_high - kStepEps) {
                a2 = low;
            } else if (obj_low > obj_high + kStepEps) {
                a2 = high;
            } else {
                return false;
            }
        }
        if (std::abs(a2 - alph2) < kStepEps * (a2 + alph2 + kStepEps)) return false;

        double a1 = alph1 + s * (alph2 - a2);
        if (a1 < 0.0) {
            a2 += s * a1;
            a1 = 0.0;
        } else if (a1 > c) {
            a2 += s * (a1 - c);
            a1 = c;
        }

        const double d1 = y1 * (a1 - alph1);
        const double d2 = y2 * (a2 - alph2);
        const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
        double new_bias;
        if (a1 > 0.0 && a1 < c) {
            new_bias = b1;
        } else if (a2 > 0.0 && a2 < c) {
            new_bias = b2;
        } else {
            new_bias = (b1 + b2) / 2.0;
        }

        const double bias_delta = new_bias - bias_;
        for (std::size_t k = 0; k < n_; ++k) {
            error_[k] += d1 * kernel(i1, k) + d2 * kernel(i2, k) + bias_delta;
        }
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        bias_ = new_bias;
        return true;
    }

    const FeatureMatrix& x_;
    const std::vector<double>& y_;
    const SvmParams& p_;
    std::size_t n_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    double bias_ = 0.0;
};

}  // namespace detail

// Soft-margin kernel SVM trained pairwise (one-vs-one). Oversized training
// sets are first reduced to params.sample_cap rows with random_sample. A pair
// that exhausts the epoch cap is still returned, flagged unconverged.
inline SvmModel fit_svm_pairwise(SvmParams params, const Dataset& train_full) {
    if (train_full.n_rows() == 0) throw DataError("fit_svm_pairwise: empty training set");
    if (params.c <= 0.0) throw DataError("fit_svm_pairwise: c must be > 0");
    if (params.gamma <= 0.0) {
        params.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(1, train_full.n_features()));
    }
    const Dataset train = train_full.n_rows() > params.sample_cap
                              ? random_sample(train_full, params.sample_cap, params.sample_seed)
                              : train_full;

    const int n_classes = train.n_classes;
    std::vector<std::size_t> class_counts(static_cast<std::size_t>(n_classes), 0);
    for (int l : train.labels) ++class_counts[static_cast<std::size_t>(l)];
    for (int c = 0; c < n_classes; ++c) {
        if (class_counts[static_cast<std::size_t>(c)] == 0) {
            throw DataError("fit_svm_pairwise: class " + std::to_string(c) +
                            " has no training samples");
        }
    }

    SvmModel model;
    model.params = params;
    model.n_classes = n_classes;
    model.n_features = train.n_features();

    for (int lo = 0; lo < n_classes; ++lo) {
        for (int hi = lo + 1; hi < n_classes; ++hi) {
            FeatureMatrix x;
            x.n_cols = train.n_features();
            std::vector<double> y;
            for (std::size_t r = 0; r < train.n_rows(); ++r) {
                if (train.labels[r] != lo && train.labels[r] != hi) continue;
                auto row = train.x.row(r);
                x.values.insert(x.values.end(), row.begin(), row.end());
                y.push_back(train.labels[r] == hi ? 1.0 : -1.0);
            }
            x.n_rows = y.size();

            detail::SmoSolver solver(x, y, params);
            const bool converged = solver.solve();

            SvmBinaryModel pair;
            pair.class_lo = lo;
            pair.class_hi = hi;
            pair.bias = solver.bias();
            pair.converged = converged;
            pair.support_vectors.n_cols = x.n_cols;
            for (std::size_t i = 0; i < x.n_rows; ++i) {
                if (solver.alpha()[i] > 1e-12) {
                    auto row = x.row(i);
                    pair.support_vectors.values.insert(pair.support_vectors.values.end(),
                                                       row.begin(), row.end());
                    pair.coefs.push_back(solver.alpha()[i] * y[i]);
                }
            }
            pair.support_vectors.n_rows = pair.coefs.size();
            model.converged = model.converged && converged;
            model.pairs.push_back(std::move(pair));
        }
    }
    return model;
}

inline double svm_decision(const SvmBinaryModel& pair, const SvmParams& params,
                           std::span<const double> x) {
    double f = pair.bias;
    for (std::size_t i = 0; i < pair.support_vectors.n_rows; ++i) {
        f += pair.coefs[i] * kernel_value(params, pair.support_vectors.row(i), x);
    }
    return f;
}

inline std::vector<int> svm_predict(const SvmModel& model, const FeatureMatrix& queries) {
    check_predict_dims(model.n_features, queries.n_cols);
    std::vector<int> out(queries.n_rows);
    std::vector<std::size_t> votes(static_cast<std::size_t>(model.n_classes));
    for (std::size_t r = 0; r < queries.n_rows; ++r) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const SvmBinaryModel& pair : model.pairs) {
            const double f = svm_decision(pair, model.params, queries.row(r));
            ++votes[static_cast<std::size_t>(f > 0.0 ? pair.class_hi : pair.class_lo)];
        }
        std::size_t best = 0;
        int cls = 0;
        for (std::size_t c = 0; c < votes.size(); ++c) {
            if (votes[c] > best) {
                best = votes[c];
                cls = static_cast<int>(c);
            }
        }
        out[r] = cls;
    }
    return out;
}

}  // namespace parclass
