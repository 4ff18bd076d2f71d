#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>

#include "parclass/dataset.hpp"
#include "parclass/errors.hpp"
#include "parclass/rng.hpp"

namespace parclass {

struct SynthSpec {
    std::size_t n_rows = 1000;
    std::size_t n_features = 4;
    int n_classes = 2;
    // Euclidean distance between consecutive class centroids; 0 makes every
    // class-conditional distribution identical.
    double class_separation = 2.0;
    std::uint64_t seed = 0;
};

// Gaussian class blobs with unit noise. Labels are drawn uniformly, then each
// feature is centered on the class centroid.
inline Dataset synth_dataset(const SynthSpec& spec) {
    if (spec.n_classes < 2) throw DataError("synth_dataset: need at least 2 classes");
    if (spec.n_rows < static_cast<std::size_t>(spec.n_classes)) {
        throw DataError("synth_dataset: need at least n_classes rows");
    }
    if (spec.n_features < 1) throw DataError("synth_dataset: need at least 1 feature");

    Dataset d;
    d.n_classes = spec.n_classes;
    d.x.n_rows = spec.n_rows;
    d.x.n_cols = spec.n_features;
    d.x.values.resize(spec.n_rows * spec.n_features);
    d.labels.resize(spec.n_rows);
    for (std::size_t f = 0; f < spec.n_features; ++f) {
        d.feature_names.push_back("f" + std::to_string(f));
    }

    const double step =
        spec.class_separation / std::sqrt(static_cast<double>(spec.n_features));
    Rng rng(spec.seed);
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
        const int label = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(spec.n_classes)));
        d.labels[r] = label;
        const double center = step * static_cast<double>(label);
        for (std::size_t f = 0; f < spec.n_features; ++f) {
            d.x.values[r * spec.n_features + f] = center + gaussian(rng);
        }
    }
    return d;
}

// Writes a Dataset in the project's CSV format: header row, comma separated,
// label column last. %.17g keeps doubles bit-exact through a reload.
inline void write_csv(const Dataset& d, const std::string& path,
                      const std::string& label_column = "label") {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);
    for (const std::string& name : d.feature_names) out << name << ",";
    out << label_column << "\n";
    char buf[40];
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        for (std::size_t f = 0; f < d.n_features(); ++f) {
            std::snprintf(buf, sizeof(buf), "%.17g", d.at(r, f));
            out << buf << ",";
        }
        out << d.labels[r] << "\n";
    }
    if (!out) throw DataError("failed while writing: " + path);
}

}  // namespace parclass
