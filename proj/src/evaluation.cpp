#include "corrohar/evaluation.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>

namespace corrohar {

const char* to_string(PredictionMode mode) {
    return mode == PredictionMode::standalone ? "standalone" : "corroborated";
}

MetricsReport score(const std::vector<SessionTrace>& traces, PredictionMode mode,
                    const LabelDictionary& dict) {
    if (traces.empty()) throw ScoringError("no traces to score");

    const int k = dict.size();
    MetricsReport report;
    report.mode = mode;
    report.confusion = ConfusionMatrix::Zero(k, k);

    for (const auto& trace : traces) {
        for (const auto& device : trace.devices) {
            for (const auto& d : device.decisions) {
                const int pred = mode == PredictionMode::standalone ? d.standalone_label
                                                                    : d.corroborated_label;
                if (trace.truth.id < 0 || trace.truth.id >= k || pred < 0 || pred >= k) {
                    throw ScoringError("label id outside the dictionary");
                }
                report.confusion(trace.truth.id, pred) += 1;
                ++report.total_decisions;
            }
        }
    }
    if (report.total_decisions == 0) throw ScoringError("traces contain no decisions");

    report.accuracy = static_cast<double>(report.confusion.trace()) /
                      static_cast<double>(report.total_decisions);

    // Unweighted class means over the dictionary; a class with an empty row
    // (never true) or column (never predicted) contributes 0.
    double recall_sum = 0.0;
    double precision_sum = 0.0;
    for (int c = 0; c < k; ++c) {
        const auto truth_count = report.confusion.row(c).sum();
        const auto predicted_count = report.confusion.col(c).sum();
        const auto hits = report.confusion(c, c);
        if (truth_count > 0) {
            recall_sum += static_cast<double>(hits) / static_cast<double>(truth_count);
        }
        if (predicted_count > 0) {
            precision_sum += static_cast<double>(hits) / static_cast<double>(predicted_count);
        }
    }
    report.macro_recall = recall_sum / static_cast<double>(k);
    report.macro_precision = precision_sum / static_cast<double>(k);
    return report;
}

AblationSummary compare(const MetricsReport& standalone, const MetricsReport& corroborated) {
    if (standalone.total_decisions != corroborated.total_decisions) {
        throw ComparisonError("reports score different decision counts: " +
                              std::to_string(standalone.total_decisions) + " vs " +
                              std::to_string(corroborated.total_decisions));
    }
    AblationSummary s;
    s.standalone_accuracy = standalone.accuracy;
    s.corroborated_accuracy = corroborated.accuracy;
    s.absolute_gain = corroborated.accuracy - standalone.accuracy;
    s.relative_gain =
        standalone.accuracy > 0.0 ? s.absolute_gain / standalone.accuracy : 0.0;
    return s;
}

namespace {

nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["mode"] = to_string(r.mode);
    j["accuracy"] = r.accuracy;
    j["macro_recall"] = r.macro_recall;
    j["macro_precision"] = r.macro_precision;
    j["total_decisions"] = r.total_decisions;
    auto& confusion = j["confusion"] = nlohmann::json::array();
    for (int row = 0; row < r.confusion.rows(); ++row) {
        nlohmann::json cells = nlohmann::json::array();
        for (int col = 0; col < r.confusion.cols(); ++col) {
            cells.push_back(r.confusion(row, col));
        }
        confusion.push_back(std::move(cells));
    }
    return j;
}

}  // namespace

void write_report_json(const MetricsReport& standalone, const MetricsReport& corroborated,
                       const AblationSummary& summary, const LabelDictionary& dict,
                       const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["labels"] = dict.names();
    doc["standalone"] = report_to_json(standalone);
    doc["corroborated"] = report_to_json(corroborated);
    doc["comparison"] = {{"absolute_gain", summary.absolute_gain},
                         {"relative_gain", summary.relative_gain}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void write_confusion_csv(const MetricsReport& report, const LabelDictionary& dict,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());

    out << "truth\\predicted";
    for (const auto& name : dict.names()) out << ',' << name;
    out << '\n';
    for (int row = 0; row < report.confusion.rows(); ++row) {
        out << dict.name(row);
        for (int col = 0; col < report.confusion.cols(); ++col) {
            out << ',' << report.confusion(row, col);
        }
        out << '\n';
    }
}

void write_ablation_csv(const MetricsReport& standalone, const MetricsReport& corroborated,
                        const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "mode,accuracy,recall_macro,precision_macro\n";
    for (const auto* r : {&standalone, &corroborated}) {
        out << to_string(r->mode) << ',' << r->accuracy << ',' << r->macro_recall << ','
            << r->macro_precision << '\n';
    }
}

}  // namespace corrohar
