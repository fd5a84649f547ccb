#include "hotspot/detect/ensemble.hpp"

#include <cstdlib>

#include "hotspot/common/error.hpp"

namespace hotspot::detect {

Prediction combine(const Prediction& a, const Prediction& b, double w) {
  Prediction out;
  out.probs = {w * a.probs[0] + (1.0 - w) * b.probs[0], w * a.probs[1] + (1.0 - w) * b.probs[1]};
  out.label = argmax_label(out.probs);
  return out;
}

EnsembleModel::EnsembleModel(Classifier& c1, Classifier& c2, double w)
    : c1_(&c1), c2_(&c2), w_(w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("ensemble weight must lie in [0,1]");
}

Prediction EnsembleModel::predict(const Image& img) {
  return combine(c1_->classify(img), c2_->classify(img), w_);
}

std::vector<Prediction> EnsembleModel::predict_all(std::span<const Image> images) {
  const auto a = c1_->classify_all(images);
  const auto b = c2_->classify_all(images);
  std::vector<Prediction> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(combine(a[i], b[i], w_));
  return out;
}

GridSearchResult grid_search_weight(std::span<const Prediction> first,
                                    std::span<const Prediction> second,
                                    std::span<const int> labels) {
  if (labels.empty()) throw ValidationError("grid search needs a non-empty validation set");
  if (first.size() != labels.size() || second.size() != labels.size()) {
    throw ValidationError("grid search inputs differ in length");
  }
  bool seen[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) throw ValidationError("labels must be 0 or 1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw ValidationError("grid search needs both classes in the validation set");
  }

  GridSearchResult res;
  std::size_t best_correct = 0;
  int best_i = -1;
  for (int i = 0; i <= 100; ++i) {
    const double w = i / 100.0;
    std::size_t correct = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      correct += combine(first[k], second[k], w).label == labels[k];
    }
    res.accuracies.push_back(static_cast<double>(correct) / static_cast<double>(labels.size()));
    // Scanning upward, a later grid point only replaces an equally accurate
    // one if it is strictly closer to 50.
    if (best_i < 0 || correct > best_correct ||
        (correct == best_correct && std::abs(i - 50) < std::abs(best_i - 50))) {
      best_correct = correct;
      best_i = i;
    }
  }
  res.weight = best_i / 100.0;
  res.accuracy = res.accuracies[static_cast<std::size_t>(best_i)];
  return res;
}

}  // namespace hotspot::detect
