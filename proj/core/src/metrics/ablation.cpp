#include "hotspot/metrics/ablation.hpp"

#include <cstdio>

#include "hotspot/common/error.hpp"

namespace hotspot::metrics {

Evaluation evaluate_predictions(const std::vector<PredictionRow>& rows, const TruthTable& truth) {
  std::vector<int> labels, predicted;
  std::vector<double> scores;
  for (const auto& r : rows) {
    const auto it = truth.find(r.id);
    if (it == truth.end()) throw ValidationError("no ground-truth label for '" + r.id + "'");
    labels.push_back(it->second);
    predicted.push_back(r.label);
    scores.push_back(r.p1);
  }
  Evaluation ev;
  ev.report = confusion_metrics(labels, predicted);
  const auto c = ev.report.counts;
  if (c.tp + c.fn > 0 && c.tn + c.fp > 0) {
    ev.roc = auc_roc(scores, labels);
    ev.report.auc = ev.roc->auc;
  }
  return ev;
}

std::vector<AblationRow> ablation_report(const std::vector<AblationRun>& runs,
                                         const TruthTable& truth) {
  std::vector<AblationRow> out;
  for (const auto& run : runs) {
    if (!std::filesystem::exists(run.predictions)) {
      throw IoError("run '" + run.name + "': predictions file '" + run.predictions.string() +
                    "' does not exist");
    }
    out.push_back({run.name, evaluate_predictions(read_predictions(run.predictions), truth).report});
  }
  return out;
}

std::string render_ablation_markdown(const std::vector<AblationRow>& rows) {
  std::string md =
      "| Method | Accuracy | Precision | Sensitivity | Specificity | F-score |\n"
      "|---|---|---|---|---|---|\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), " | %.2f | %.2f | %.2f | %.2f | %.2f |\n", r.report.accuracy,
                  r.report.precision, r.report.sensitivity, r.report.specificity,
                  r.report.f_score);
    md += "| " + r.name + buf;
  }
  return md;
}

}  // namespace hotspot::metrics
