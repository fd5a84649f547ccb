#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/data/thermal_image.hpp"
#include "hotspot/detect/classifier.hpp"
#include "hotspot/nn/tensor.hpp"

namespace hotspot::detect {

struct FinetuneConfig {
  int epochs = 200;
  int batch_size = 16;
  double lr = 1e-3;
  // Epochs without validation-loss improvement before stopping; 0 disables.
  // The weights of the best validation epoch are restored either way.
  int patience = 10;
  double val_fraction = 0.2;
  bool train_encoder = true;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const FinetuneConfig& cfg);
FinetuneConfig finetune_config_from_json(const nlohmann::json& j);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Per-class shuffle, then round(n_c * val_fraction) of each class (keeping at
// least one training sample per class) goes to validation.
Split stratified_split(std::span<const int> labels, double val_fraction, std::uint64_t seed);

struct EpochMetrics {
  int epoch = 0;  // 0 = before any update
  double train_loss = 0;
  double train_accuracy = 0;
  double val_loss = 0;
  double val_accuracy = 0;
};

struct FinetuneResult {
  std::vector<EpochMetrics> curve;
  int best_epoch = 0;
  bool stopped_early = false;
  Split split;
  [[nodiscard]] const EpochMetrics& best() const;
};

// Sparse categorical cross-entropy of N×2 logits; mean over rows. If `grad`
// is given it receives d(loss)/d(logits).
double sparse_cross_entropy(const nn::Tensor& logits, std::span<const int> labels,
                            nn::Tensor* grad = nullptr);

// Produces the input batch for the given sample indices.
using BatchSource = std::function<nn::Tensor(std::span<const std::size_t>)>;

// Adam on sparse categorical cross-entropy. With an empty validation split the
// training metrics stand in for validation ones.
FinetuneResult finetune(Classifier& clf, const BatchSource& source, std::span<const int> labels,
                        const FinetuneConfig& cfg);
// Rows of `inputs` (N×C×H×W) are the samples.
FinetuneResult finetune(Classifier& clf, const nn::Tensor& inputs, std::span<const int> labels,
                        const FinetuneConfig& cfg);
// Every image must carry a label.
FinetuneResult finetune(Classifier& clf, std::span<const data::ThermalImage> images,
                        const FinetuneConfig& cfg);

// Accuracy of argmax predictions (ties to 0).
double accuracy(std::span<const Prediction> preds, std::span<const int> labels);

}  // namespace hotspot::detect
