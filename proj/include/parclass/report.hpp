#pragma once

#include <algorithm>
#include <iomanip>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "parclass/ensemble.hpp"
#include "parclass/errors.hpp"
#include "parclass/executor.hpp"
#include "parclass/metrics.hpp"

namespace parclass {

inline constexpr const char* kReportSchemaVersion = "parclass.report/1";

struct DatasetFingerprint {
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t n_features = 0;
    int n_classes = 0;
    std::uint64_t seed = 0;

    bool operator==(const DatasetFingerprint&) const = default;
};

struct ConfigReport {
    int config_id = 0;
    std::string params;
    MetricSet metrics;
    std::optional<double> serial_fit_seconds, serial_predict_seconds;
    std::optional<double> parallel_fit_seconds, parallel_predict_seconds;
    std::vector<std::string> warnings;

    bool operator==(const ConfigReport&) const = default;
};

// Everything Table-style benchmarking needs: per-config quality, ensemble
// quality, serial/parallel wall times and their ratio.
struct BenchmarkReport {
    std::string schema_version = kReportSchemaVersion;
    std::string algorithm;
    DatasetFingerprint dataset;
    std::size_t n_workers = 0;
    std::optional<double> serial_seconds, parallel_seconds, speedup;
    std::vector<ConfigReport> per_config;
    std::optional<MetricSet> ensemble_serial, ensemble_parallel;
    double best_single_accuracy = 0.0;
    double worst_single_accuracy = 0.0;
    bool equivalence_checked = false;
    bool equivalence_ok = true;

    bool operator==(const BenchmarkReport&) const = default;
};

struct ReportInputs {
    std::string algorithm;
    DatasetFingerprint dataset;
    std::size_t n_workers = 0;
    const RunOutcome* serial = nullptr;
    const RunOutcome* parallel = nullptr;
    const EnsembleResult* ensemble_serial = nullptr;
    const EnsembleResult* ensemble_parallel = nullptr;
    std::vector<std::string> config_labels;  // indexed by config_id
};

namespace detail {

inline void check_same_plan(const RunOutcome& a, const RunOutcome& b,
                            std::span<const int> test_labels) {
    if (a.results.size() != b.results.size()) {
        throw DataError("build_report: outcomes cover different plans");
    }
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        if (a.results[i].config_id != b.results[i].config_id) {
            throw DataError("build_report: outcomes cover different plans");
        }
        if (a.results[i].predictions.size() != test_labels.size() ||
            b.results[i].predictions.size() != test_labels.size()) {
            throw DataError("build_report: predictions do not match the test set size");
        }
    }
}

}  // namespace detail

// Assembles the benchmark report. When both outcomes are present their
// predictions are compared config by config, along with the two ensembles;
// any mismatch clears equivalence_ok and is flagged in the rendering.
inline BenchmarkReport build_report(const ReportInputs& in, std::span<const int> test_labels,
                                    int positive_class) {
    if (!in.serial && !in.parallel) throw DataError("build_report: no run outcome given");
    const RunOutcome& primary = in.serial ? *in.serial : *in.parallel;
    for (const ConfigResult& r : primary.results) {
        if (r.predictions.size() != test_labels.size()) {
            throw DataError("build_report: predictions do not match the test set size");
        }
    }

    BenchmarkReport report;
    report.algorithm = in.algorithm;
    report.dataset = in.dataset;
    report.n_workers = in.n_workers;
    if (in.serial) report.serial_seconds = in.serial->wall_seconds;
    if (in.parallel) report.parallel_seconds = in.parallel->wall_seconds;
    if (in.serial && in.parallel && in.parallel->wall_seconds > 0.0) {
        report.speedup = in.serial->wall_seconds / in.parallel->wall_seconds;
    }

    if (in.serial && in.parallel) {
        detail::check_same_plan(*in.serial, *in.parallel, test_labels);
        report.equivalence_checked = true;
        for (std::size_t i = 0; i < in.serial->results.size(); ++i) {
            if (in.serial->results[i].predictions != in.parallel->results[i].predictions) {
                report.equivalence_ok = false;
            }
        }
        if (in.ensemble_serial && in.ensemble_parallel &&
            !(*in.ensemble_serial == *in.ensemble_parallel)) {
            report.equivalence_ok = false;
        }
    }

    report.best_single_accuracy = 0.0;
    report.worst_single_accuracy = 1.0;
    for (std::size_t i = 0; i < primary.results.size(); ++i) {
        const ConfigResult& r = primary.results[i];
        ConfigReport cr;
        cr.config_id = r.config_id;
        if (static_cast<std::size_t>(r.config_id) < in.config_labels.size()) {
            cr.params = in.config_labels[static_cast<std::size_t>(r.config_id)];
        }
        cr.metrics =
            metric_set(confusion(test_labels, r.predictions, in.dataset.n_classes),
                       positive_class);
        cr.warnings = r.warnings;
        if (in.serial) {
            cr.serial_fit_seconds = in.serial->results[i].fit_seconds;
            cr.serial_predict_seconds = in.serial->results[i].predict_seconds;
        }
        if (in.parallel) {
            cr.parallel_fit_seconds = in.parallel->results[i].fit_seconds;
            cr.parallel_predict_seconds = in.parallel->results[i].predict_seconds;
        }
        report.best_single_accuracy = std::max(report.best_single_accuracy, cr.metrics.accuracy);
        report.worst_single_accuracy = std::min(report.worst_single_accuracy, cr.metrics.accuracy);
        report.per_config.push_back(std::move(cr));
    }

    if (in.ensemble_serial) {
        report.ensemble_serial = metric_set(
            confusion(test_labels, in.ensemble_serial->predictions, in.dataset.n_classes),
            positive_class);
    }
    if (in.ensemble_parallel) {
        report.ensemble_parallel = metric_set(
            confusion(test_labels, in.ensemble_parallel->predictions, in.dataset.n_classes),
            positive_class);
    }
    return report;
}

// --- JSON serialization -----------------------------------------------------

namespace detail {

inline nlohmann::json to_json(const MetricSet& m) {
    return {{"accuracy", m.accuracy},       {"precision", m.precision},
            {"recall", m.recall},           {"f1", m.f1},
            {"positive_class", m.positive_class}, {"warnings", m.warnings}};
}

inline MetricSet metric_set_from_json(const nlohmann::json& j) {
    MetricSet m;
    m.accuracy = j.at("accuracy").get<double>();
    m.precision = j.at("precision").get<double>();
    m.recall = j.at("recall").get<double>();
    m.f1 = j.at("f1").get<double>();
    m.positive_class = j.at("positive_class").get<int>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
}

template <typename T>
nlohmann::json opt_json(const std::optional<T>& v) {
    if (v) return *v;
    return nullptr;
}

inline std::optional<double> opt_double_from_json(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace detail

inline nlohmann::json report_to_json(const BenchmarkReport& r) {
    nlohmann::json j;
    j["schema_version"] = r.schema_version;
    j["algorithm"] = r.algorithm;
    j["dataset"] = {{"train_rows", r.dataset.train_rows},
                    {"test_rows", r.dataset.test_rows},
                    {"n_features", r.dataset.n_features},
                    {"n_classes", r.dataset.n_classes},
                    {"seed", r.dataset.seed}};
    j["n_workers"] = r.n_workers;
    j["serial_seconds"] = detail::opt_json(r.serial_seconds);
    j["parallel_seconds"] = detail::opt_json(r.parallel_seconds);
    j["speedup"] = detail::opt_json(r.speedup);
    j["best_single_accuracy"] = r.best_single_accuracy;
    j["worst_single_accuracy"] = r.worst_single_accuracy;
    j["equivalence_checked"] = r.equivalence_checked;
    j["equivalence_ok"] = r.equivalence_ok;
    j["ensemble_serial"] =
        r.ensemble_serial ? detail::to_json(*r.ensemble_serial) : nlohmann::json(nullptr);
    j["ensemble_parallel"] =
        r.ensemble_parallel ? detail::to_json(*r.ensemble_parallel) : nlohmann::json(nullptr);
    j["per_config"] = nlohmann::json::array();
    for (const ConfigReport& c : r.per_config) {
        nlohmann::json cj;
        cj["config_id"] = c.config_id;
        cj["params"] = c.params;
        cj["metrics"] = detail::to_json(c.metrics);
        cj["serial_fit_seconds"] = detail::opt_json(c.serial_fit_seconds);
        cj["serial_predict_seconds"] = detail::opt_json(c.serial_predict_seconds);
        cj["parallel_fit_seconds"] = detail::opt_json(c.parallel_fit_seconds);
        cj["parallel_predict_seconds"] = detail::opt_json(c.parallel_predict_seconds);
        cj["warnings"] = c.warnings;
        j["per_config"].push_back(std::move(cj));
    }
    return j;
}

inline BenchmarkReport report_from_json(const nlohmann::json& j) {
    BenchmarkReport r;
    r.schema_version = j.at("schema_version").get<std::string>();
    if (r.schema_version != kReportSchemaVersion) {
        throw DataError("unsupported report schema: " + r.schema_version);
    }
    r.algorithm = j.at("algorithm").get<std::string>();
    const auto& d = j.at("dataset");
    r.dataset.train_rows = d.at("train_rows").get<std::size_t>();
    r.dataset.test_rows = d.at("test_rows").get<std::size_t>();
    r.dataset.n_features = d.at("n_features").get<std::size_t>();
    r.dataset.n_classes = d.at("n_classes").get<int>();
    r.dataset.seed = d.at("seed").get<std::uint64_t>();
    r.n_workers = j.at("n_workers").get<std::size_t>();
    r.serial_seconds = detail::opt_double_from_json(j.at("serial_seconds"));
    r.parallel_seconds = detail::opt_double_from_json(j.at("parallel_seconds"));
    r.speedup = detail::opt_double_from_json(j.at("speedup"));
    r.best_single_accuracy = j.at("best_single_accuracy").get<double>();
    r.worst_single_accuracy = j.at("worst_single_accuracy").get<double>();
    r.equivalence_checked = j.at("equivalence_checked").get<bool>();
    r.equivalence_ok = j.at("equivalence_ok").get<bool>();
    if (!j.at("ensemble_serial").is_null()) {
        r.ensemble_serial = detail::metric_set_from_json(j.at("ensemble_serial"));
    }
    if (!j.at("ensemble_parallel").is_null()) {
        r.ensemble_parallel = detail::metric_set_from_json(j.at("ensemble_parallel"));
    }
    for (const auto& cj : j.at("per_config")) {
        ConfigReport c;
        c.config_id = cj.at("config_id").get<int>();
        c.params = cj.at("params").get<std::string>();
        c.metrics = detail::metric_set_from_json(cj.at("metrics"));
        c.serial_fit_seconds = detail::opt_double_from_json(cj.at("serial_fit_seconds"));
        c.serial_predict_seconds = detail::opt_double_from_json(cj.at("serial_predict_seconds"));
        c.parallel_fit_seconds = detail::opt_double_from_json(cj.at("parallel_fit_seconds"));
        c.parallel_predict_seconds =
            detail::opt_double_from_json(cj.at("parallel_predict_seconds"));
        c.warnings = cj.at("warnings").get<std::vector<std::string>>();
        r.per_config.push_back(std::move(c));
    }
    return r;
}

// --- text rendering ----------------------------------------------------------

inline std::string render_text(const BenchmarkReport& r) {
    std::ostringstream os;
    os << std::fixed;
    const auto opt = [](const std::optional<double>& v, int prec = 4) {
        if (!v) return std::string("-");
        std::ostringstream s;
        s << std::fixed << std::setprecision(prec) << *v;
        return s.str();
    };

    os << "benchmark report (" << r.schema_version << ")\n";
    os << "algorithm: " << r.algorithm << "   workers: " << r.n_workers << "\n";
    os << "dataset: train=" << r.dataset.train_rows << " test=" << r.dataset.test_rows
       << " features=" << r.dataset.n_features << " classes=" << r.dataset.n_classes
       << " seed=" << r.dataset.seed << "\n";
    os << "serial wall:   " << opt(r.serial_seconds) << " s\n";
    os << "parallel wall: " << opt(r.parallel_seconds) << " s\n";
    os << "speedup:       " << opt(r.speedup) << "\n";
    if (r.equivalence_checked) {
        os << "serial/parallel equivalence: "
           << (r.equivalence_ok ? "ok" : "*** VIOLATION: predictions differ ***") << "\n";
    }
    os << "best single accuracy:  " << std::setprecision(4) << r.best_single_accuracy << "\n";
    os << "worst single accuracy: " << std::setprecision(4) << r.worst_single_accuracy << "\n";
    const auto metric_line = [&](const char* name, const std::optional<MetricSet>& m) {
        if (!m) return;
        os << name << std::setprecision(4) << " accuracy=" << m->accuracy
           << " precision=" << m->precision << " recall=" << m->recall << " f1=" << m->f1
           << "\n";
    };
    metric_line("ensemble (serial): ", r.ensemble_serial);
    metric_line("ensemble (parallel):", r.ensemble_parallel);

    os << "\n" << std::left << std::setw(4) << "id" << std::setw(42) << "params"
       << std::right << std::setw(9) << "acc" << std::setw(9) << "prec" << std::setw(9)
       << "rec" << std::setw(9) << "f1" << std::setw(12) << "fit_s(ser)" << std::setw(12)
       << "fit_s(par)" << "\n";
    for (const ConfigReport& c : r.per_config) {
        os << std::left << std::setw(4) << c.config_id << std::setw(42) << c.params
           << std::right << std::setprecision(4) << std::setw(9) << c.metrics.accuracy
           << std::setw(9) << c.metrics.precision << std::setw(9) << c.metrics.recall
           << std::setw(9) << c.metrics.f1 << std::setw(12) << opt(c.serial_fit_seconds)
           << std::setw(12) << opt(c.parallel_fit_seconds) << "\n";
        for (const std::string& w : c.warnings) {
            os << "      ! " << w << "\n";
        }
    }
    return os.str();
}

}  // namespace parclass
