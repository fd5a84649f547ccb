#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hotspot/metrics/classification.hpp"
#include "hotspot/metrics/predictions.hpp"
#include "hotspot/metrics/roc.hpp"

namespace hotspot::metrics {

using TruthTable = std::map<std::string, int>;  // id → true label

struct Evaluation {
  MetricsReport report;
  std::optional<RocResult> roc;  // absent when only one class is present
};

// Matches rows to truth by id; every row must have a truth entry. The AUC
// uses p1 as the anomaly score.
Evaluation evaluate_predictions(const std::vector<PredictionRow>& rows, const TruthTable& truth);

struct AblationRun {
  std::string name;
  std::filesystem::path predictions;
};

struct AblationRow {
  std::string name;
  MetricsReport report;
};

// One row per run, in the given order. A missing predictions file throws
// IoError naming the run.
std::vector<AblationRow> ablation_report(const std::vector<AblationRun>& runs,
                                         const TruthTable& truth);

// Markdown table: method, accuracy, precision, sensitivity, specificity,
// F-score, with two decimals.
std::string render_ablation_markdown(const std::vector<AblationRow>& rows);

}  // namespace hotspot::metrics
