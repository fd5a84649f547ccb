#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <nlohmann/json.hpp>

namespace hotspot::metrics {

struct ConfusionCounts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  [[nodiscard]] std::int64_t total() const { return tp + tn + fp + fn; }
};

// Label 1 (anomalous) is the positive class.
ConfusionCounts confusion_counts(std::span<const int> labels, std::span<const int> predicted);

struct MetricsReport {
  ConfusionCounts counts;
  double accuracy = 0, precision = 0, sensitivity = 0, specificity = 0, f_score = 0;
  std::optional<double> auc;
  // Set when the metric's denominator was zero; the value is then 0.0.
  bool precision_undefined = false;
  bool sensitivity_undefined = false;
  bool specificity_undefined = false;
  bool f_score_undefined = false;
};

MetricsReport confusion_metrics(const ConfusionCounts& counts);
// Throws ValidationError on empty or mismatched input or labels outside {0,1}.
MetricsReport confusion_metrics(std::span<const int> labels, std::span<const int> predicted);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace hotspot::metrics
