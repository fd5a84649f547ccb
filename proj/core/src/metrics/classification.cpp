#include "hotspot/metrics/classification.hpp"

#include "hotspot/common/error.hpp"

namespace hotspot::metrics {

ConfusionCounts confusion_counts(std::span<const int> labels, std::span<const int> predicted) {
  if (labels.empty()) throw ValidationError("no samples to evaluate");
  if (labels.size() != predicted.size()) {
    throw ValidationError("label and prediction counts differ");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i], p = predicted[i];
    if ((y != 0 && y != 1) || (p != 0 && p != 1)) {
      throw ValidationError("labels and predictions must be 0 or 1");
    }
    if (y == 1) {
      (p == 1 ? c.tp : c.fn) += 1;
    } else {
      (p == 1 ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

namespace {

double ratio(double num, double den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : num / den;
}

}  // namespace

MetricsReport confusion_metrics(const ConfusionCounts& c) {
  if (c.tp < 0 || c.tn < 0 || c.fp < 0 || c.fn < 0) {
    throw ValidationError("confusion counts must be non-negative");
  }
  if (c.total() == 0) throw ValidationError("no samples to evaluate");
  MetricsReport r;
  r.counts = c;
  const auto tp = static_cast<double>(c.tp), tn = static_cast<double>(c.tn);
  const auto fp = static_cast<double>(c.fp), fn = static_cast<double>(c.fn);
  r.accuracy = (tp + tn) / static_cast<double>(c.total());
  r.precision = ratio(tp, tp + fp, r.precision_undefined);
  r.sensitivity = ratio(tp, tp + fn, r.sensitivity_undefined);
  r.specificity = ratio(tn, tn + fp, r.specificity_undefined);
  r.f_score = ratio(tp, tp + (fp + fn) / 2.0, r.f_score_undefined);
  return r;
}

MetricsReport confusion_metrics(std::span<const int> labels, std::span<const int> predicted) {
  return confusion_metrics(confusion_counts(labels, predicted));
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j = {
      {"counts", {{"tp", r.counts.tp}, {"tn", r.counts.tn}, {"fp", r.counts.fp}, {"fn", r.counts.fn}}},
      {"accuracy", r.accuracy},
      {"precision", r.precision},
      {"sensitivity", r.sensitivity},
      {"specificity", r.specificity},
      {"f_score", r.f_score},
      {"undefined",
       {{"precision", r.precision_undefined},
        {"sensitivity", r.sensitivity_undefined},
        {"specificity", r.specificity_undefined},
        {"f_score", r.f_score_undefined}}}};
  j["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
  return j;
}

}  // namespace hotspot::metrics
