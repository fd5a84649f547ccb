#pragma once

#include <span>
#include <vector>

#include "hotspot/detect/classifier.hpp"

namespace hotspot::detect {

// w·a + (1−w)·b, labelled with the usual tie rule.
Prediction combine(const Prediction& a, const Prediction& b, double w);

class EnsembleModel {
 public:
  EnsembleModel(Classifier& c1, Classifier& c2, double w);

  Prediction predict(const Image& img);
  std::vector<Prediction> predict_all(std::span<const Image> images);
  [[nodiscard]] double weight() const { return w_; }

 private:
  Classifier* c1_;
  Classifier* c2_;
  double w_;
};

struct GridSearchResult {
  double weight = 0.5;
  double accuracy = 0;
  std::vector<double> accuracies;  // index i ↔ w = i/100
};

// Tries w = 0, 0.01, …, 1 and keeps the most accurate; among equally accurate
// weights the one closest to 0.5 wins, and between two equally close the
// smaller one.
GridSearchResult grid_search_weight(std::span<const Prediction> first,
                                    std::span<const Prediction> second,
                                    std::span<const int> labels);

}  // namespace hotspot::detect
