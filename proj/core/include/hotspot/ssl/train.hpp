#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/common/error.hpp"
#include "hotspot/data/augment.hpp"
#include "hotspot/data/thermal_image.hpp"
#include "hotspot/ssl/loss.hpp"
#include "hotspot/ssl/model.hpp"

namespace hotspot::ssl {

struct TrainConfig {
  int batch_size = 81;
  double lr = 0.001;
  double momentum = 0.6;
  int epochs = 200;
  // Stop after this many epochs without a loss improvement of at least
  // early_stop_min_delta; 0 disables early stopping.
  int early_stop_patience = 0;
  double early_stop_min_delta = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LossConfig& cfg);
LossConfig loss_config_from_json(const nlohmann::json& j);

struct EpochStats {
  int epoch = 0;
  double loss = 0;
  double similarity = 0;
  double cross_entropy = 0;
  // Mean over dimensions of the across-batch std of ℓ2-normalized projections.
  double collapse_std = 0;
};

struct TrainResult {
  std::vector<EpochStats> history;
  bool stopped_early = false;
};

// Thrown when a step produces a non-finite loss.
class TrainingDiverged : public NumericDomainError {
 public:
  TrainingDiverged(int epoch, int step, double similarity, double cross_entropy);

  int epoch;
  int step;
  double similarity;
  double cross_entropy;
};

using EpochObserver = std::function<void(const EpochStats&)>;

// Per-dimension std of row-normalized projections, averaged over dimensions.
double collapse_monitor(const nn::Tensor& projections);

// Siamese pre-training. Each step builds two augmented views per image, runs
// both through the shared encoder and the predictor, and back-propagates the
// batch-mean loss through the predictor branches only; projections enter the
// loss as constants. Parameters are updated by SGD with momentum.
TrainResult ssl_train(Encoder& encoder, Predictor& predictor,
                      std::span<const data::ThermalImage> images, const TrainConfig& tcfg,
                      const LossConfig& lcfg, const data::AugmentPolicy& policy,
                      const EpochObserver& on_epoch = {});

void write_history_csv(const std::string& path, std::span<const EpochStats> history);

}  // namespace hotspot::ssl
