#include <doctest.h>

#include <cmath>

#include "parclass/svm.hpp"
#include "parclass/synth.hpp"

using namespace parclass;

namespace {

Dataset points(const std::vector<std::vector<double>>& rows, std::vector<int> labels,
               int n_classes) {
    Dataset d;
    d.x.n_rows = rows.size();
    d.x.n_cols = rows[0].size();
    for (const auto& r : rows) d.x.values.insert(d.x.values.end(), r.begin(), r.end());
    d.labels = std::move(labels);
    d.n_classes = n_classes;
    for (std::size_t c = 0; c < d.x.n_cols; ++c) d.feature_names.push_back("f");
    return d;
}

// Two interleaved half-moons, 2k points total, deterministic.
Dataset two_moons(std::size_t per_class) {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < per_class; ++i) {
        const double t = pi * static_cast<double>(i) / static_cast<double>(per_class - 1);
        rows.push_back({std::cos(t), std::sin(t)});
        labels.push_back(0);
        rows.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
        labels.push_back(1);
    }
    return points(rows, labels, 2);
}

double training_accuracy(const SvmModel& m, const Dataset& d) {
    const std::vector<int> pred = svm_predict(m, d.x);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == d.labels[i];
    return static_cast<double>(hit) / static_cast<double>(pred.size());
}

// Simplified SMO (pick j deterministically, no error cache) used as an
// independent oracle at desk scale.
struct SimpleSmo {
    std::vector<double> alpha;
    double b = 0.0;
    const Dataset& d;
    std::vector<double> y;
    SvmParams p;

    explicit SimpleSmo(const Dataset& data, SvmParams params)
        : alpha(data.n_rows(), 0.0), d(data), p(params) {
        for (int l : d.labels) y.push_back(l == 1 ? 1.0 : -1.0);
    }

    double f(std::size_t i) const {
        double s = b;
        for (std::size_t k = 0; k < d.n_rows(); ++k) {
            if (alpha[k] > 0) s += alpha[k] * y[k] * kernel_value(p, d.x.row(k), d.x.row(i));
        }
        return s;
    }

    void train(std::size_t max_passes) {
        std::size_t passes = 0;
        while (passes < max_passes) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < d.n_rows(); ++i) {
                const double ei = f(i) - y[i];
                if (!((y[i] * ei < -1e-3 && alpha[i] < p.c) ||
                      (y[i] * ei > 1e-3 && alpha[i] > 0))) {
                    continue;
                }
                const std::size_t j = (i + 1) % d.n_rows();
                const double ej = f(j) - y[j];
                const double ai_old = alpha[i], aj_old = alpha[j];
                double low, high;
                if (y[i] != y[j]) {
                    low = std::max(0.0, aj_old - ai_old);
                    high = std::min(p.c, p.c + aj_old - ai_old);
                } else {
                    low = std::max(0.0, ai_old + aj_old - p.c);
                    high = std::min(p.c, ai_old + aj_old);
                }
                if (low >= high) continue;
                const double eta = 2 * kernel_value(p, d.x.row(i), d.x.row(j)) -
                                   kernel_value(p, d.x.row(i), d.x.row(i)) -
                                   kernel_value(p, d.x.row(j), d.x.row(j));
                if (eta >= 0) continue;
                double aj = aj_old - y[j] * (ei - ej) / eta;
                aj = std::min(high, std::max(low, aj));
                if (std::abs(aj - aj_old) < 1e-5) continue;
                const double ai = ai_old + y[i] * y[j] * (aj_old - aj);
                const double b1 = b - ei - y[i] * (ai - ai_old) *
                                      kernel_value(p, d.x.row(i), d.x.row(i)) -
                                  y[j] * (aj - aj_old) * kernel_value(p, d.x.row(i), d.x.row(j));
                const double b2 = b - ej - y[i] * (ai - ai_old) *
                                      kernel_value(p, d.x.row(i), d.x.row(j)) -
                                  y[j] * (aj - aj_old) * kernel_value(p, d.x.row(j), d.x.row(j));
                alpha[i] = ai;
                alpha[j] = aj;
                if (ai > 0 && ai < p.c) {
                    b = b1;
                } else if (aj > 0 && aj < p.c) {
                    b = b2;
                } else {
                    b = (b1 + b2) / 2;
                }
                ++changed;
            }
            passes = changed == 0 ? passes + 1 : 0;
        }
    }

    double accuracy() const {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            const double s = f(i);
            hit += (s > 0 ? 1 : 0) == d.labels[i];
        }
        return static_cast<double>(hit) / static_cast<double>(d.n_rows());
    }
};

}  // namespace

TEST_CASE("kernel values") {
    SvmParams p;
    const std::vector<double> a{1, 2}, b{3, 4};
    p.kernel = SvmKernel::linear;
    CHECK(kernel_value(p, a, b) == doctest::Approx(11.0));
    p.kernel = SvmKernel::poly;
    p.gamma = 0.5;
    p.coef0 = 1.0;
    p.degree = 2;
    CHECK(kernel_value(p, a, b) == doctest::Approx((0.5 * 11 + 1) * (0.5 * 11 + 1)));
    p.kernel = SvmKernel::sigmoid;
    CHECK(kernel_value(p, a, b) == doctest::Approx(std::tanh(0.5 * 11 + 1)));
}

TEST_CASE("linear kernel separates classes at x<0 and x>0 perfectly") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 1; i <= 10; ++i) {
        rows.push_back({-0.2 * i, 0.1 * i});
        labels.push_back(0);
        rows.push_back({0.2 * i, -0.1 * i});
        labels.push_back(1);
    }
    const Dataset d = points(rows, labels, 2);
    SvmParams p;
    p.kernel = SvmKernel::linear;
    const SvmModel m = fit_svm_pairwise(p, d);
    CHECK(m.converged);
    CHECK(training_accuracy(m, d) == doctest::Approx(1.0));
}

TEST_CASE("dual coefficients stay within [0, C] up to tolerance") {
    const Dataset d = synth_dataset(SynthSpec{120, 2, 2, 1.0, 77});
    for (const SvmKernel kernel : {SvmKernel::linear, SvmKernel::poly, SvmKernel::sigmoid}) {
        SvmParams p;
        p.kernel = kernel;
        p.gamma = 0.5;
        const SvmModel m = fit_svm_pairwise(p, d);
        if (!m.converged) continue;  // bound only promised for converged models
        for (const SvmBinaryModel& pair : m.pairs) {
            for (double coef : pair.coefs) {
                CHECK(std::abs(coef) <= p.c + 1e-3);
                CHECK(std::abs(coef) > 0.0);
            }
        }
    }
}

TEST_CASE("poly-3 two-moons accuracy matches an independent SMO within 2%") {
    const Dataset d = two_moons(25);  // 50 points, so 2% = one sample
    SvmParams p;
    p.kernel = SvmKernel::poly;
    p.degree = 3;
    p.gamma = 1.0;
    p.coef0 = 1.0;
    const SvmModel m = fit_svm_pairwise(p, d);
    const double ours = training_accuracy(m, d);

    SimpleSmo oracle(d, p);
    oracle.train(5);
    CHECK(std::abs(ours - oracle.accuracy()) <= 0.02);
}

TEST_CASE("multi-class one-vs-one voting") {
    const Dataset d = synth_dataset(SynthSpec{150, 2, 3, 8.0, 11});
    SvmParams p;
    p.kernel = SvmKernel::linear;
    const SvmModel m = fit_svm_pairwise(p, d);
    CHECK(m.pairs.size() == 3);  // (0,1), (0,2), (1,2)
    CHECK(training_accuracy(m, d) >= 0.95);
}

TEST_CASE("oversized training sets are subsampled to the cap") {
    const Dataset d = synth_dataset(SynthSpec{600, 2, 2, 6.0, 31});
    SvmParams p;
    p.kernel = SvmKernel::linear;
    p.sample_cap = 200;
    p.sample_seed = 9;
    const SvmModel m = fit_svm_pairwise(p, d);
    // Support vectors can only come from the 200 sampled rows.
    std::size_t total_sv = 0;
    for (const auto& pair : m.pairs) total_sv += pair.support_vectors.n_rows;
    CHECK(total_sv <= 200);
    CHECK(training_accuracy(m, d) >= 0.95);
}

TEST_CASE("fit is deterministic and validates inputs") {
    const Dataset d = synth_dataset(SynthSpec{80, 2, 2, 2.0, 51});
    SvmParams p;
    p.kernel = SvmKernel::sigmoid;
    p.gamma = 0.25;
    const SvmModel a = fit_svm_pairwise(p, d);
    const SvmModel b = fit_svm_pairwise(p, d);
    REQUIRE(a.pairs.size() == b.pairs.size());
    CHECK(a.pairs[0].coefs == b.pairs[0].coefs);
    CHECK(a.pairs[0].bias == b.pairs[0].bias);

    SvmParams bad;
    bad.c = 0.0;
    CHECK_THROWS_AS(fit_svm_pairwise(bad, d), DataError);
}

TEST_CASE("an epoch cap of 1 yields an unconverged but usable model") {
    const Dataset d = two_moons(15);
    SvmParams p;
    p.kernel = SvmKernel::poly;
    p.degree = 3;
    p.coef0 = 1.0;
    p.max_epochs = 1;
    const SvmModel m = fit_svm_pairwise(p, d);
    CHECK_FALSE(m.converged);
    CHECK(svm_predict(m, d.x).size() == d.n_rows());
}
