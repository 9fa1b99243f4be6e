#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <vector>

#include "corrohar/simulator.hpp"

namespace corrohar {

// Rows = truth, columns = prediction.
using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

enum class PredictionMode { standalone, corroborated };

const char* to_string(PredictionMode mode);

struct MetricsReport {
    PredictionMode mode = PredictionMode::standalone;
    double accuracy = 0.0;
    double macro_recall = 0.0;
    double macro_precision = 0.0;
    ConfusionMatrix confusion;
    std::int64_t total_decisions = 0;
};

// Accumulates every decision of every trace. Macro metrics are unweighted
// class means over the full dictionary; a class never predicted contributes
// 0 to macro precision (and one never seen contributes 0 to macro recall).
// ScoringError when the traces carry no decisions.
MetricsReport score(const std::vector<SessionTrace>& traces, PredictionMode mode,
                    const LabelDictionary& dict);

struct AblationSummary {
    double standalone_accuracy = 0.0;
    double corroborated_accuracy = 0.0;
    double absolute_gain = 0.0;  // percentage points, corr - standalone
    double relative_gain = 0.0;  // (corr - standalone) / standalone
};

// Both readings of "improved accuracy by X%": absolute points and relative
// change. ComparisonError when the reports scored different decision counts.
AblationSummary compare(const MetricsReport& standalone, const MetricsReport& corroborated);

// evaluate/ablate output files.
void write_report_json(const MetricsReport& standalone, const MetricsReport& corroborated,
                       const AblationSummary& summary, const LabelDictionary& dict,
                       const std::filesystem::path& path);
void write_confusion_csv(const MetricsReport& report, const LabelDictionary& dict,
                         const std::filesystem::path& path);
void write_ablation_csv(const MetricsReport& standalone, const MetricsReport& corroborated,
                        const std::filesystem::path& path);

}  // namespace corrohar
