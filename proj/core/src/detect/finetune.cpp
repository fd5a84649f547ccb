#include "hotspot/detect/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hotspot/common/error.hpp"
#include "hotspot/nn/optim.hpp"
#include "hotspot/ssl/model.hpp"

namespace hotspot::detect {

void FinetuneConfig::validate() const {
  if (epochs < 0) throw ValidationError("epochs must be non-negative");
  if (batch_size < 1) throw ValidationError("batch_size must be positive");
  if (!(lr >= 0.0)) throw ValidationError("lr must be non-negative");
  if (patience < 0) throw ValidationError("patience must be non-negative");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw ValidationError("val_fraction must lie in [0,1)");
  }
}

nlohmann::json to_json(const FinetuneConfig& cfg) {
  return {{"epochs", cfg.epochs},         {"batch_size", cfg.batch_size},
          {"lr", cfg.lr},                 {"patience", cfg.patience},
          {"val_fraction", cfg.val_fraction}, {"train_encoder", cfg.train_encoder},
          {"seed", cfg.seed}};
}

FinetuneConfig finetune_config_from_json(const nlohmann::json& j) {
  FinetuneConfig cfg;
  cfg.epochs = j.at("epochs").get<int>();
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.lr = j.at("lr").get<double>();
  cfg.patience = j.at("patience").get<int>();
  cfg.val_fraction = j.at("val_fraction").get<double>();
  cfg.train_encoder = j.at("train_encoder").get<bool>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

const EpochMetrics& FinetuneResult::best() const {
  for (const auto& m : curve) {
    if (m.epoch == best_epoch) return m;
  }
  throw Error("finetune result has no curve");
}

Split stratified_split(std::span<const int> labels, double val_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Split split;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_val = static_cast<std::size_t>(std::lround(static_cast<double>(idx.size()) * val_fraction));
    if (!idx.empty()) n_val = std::min(n_val, idx.size() - 1);
    split.validation.insert(split.validation.end(), idx.begin(),
                            idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.insert(split.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_val),
                       idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

double sparse_cross_entropy(const nn::Tensor& logits, std::span<const int> labels,
                            nn::Tensor* grad) {
  const int n = logits.dim(0);
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw ValidationError("label count does not match logits");
  }
  const nn::Tensor probs = softmax_rows(logits);
  if (grad) *grad = nn::Tensor(logits.shape());
  double loss = 0;
  for (int i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    // log-softmax directly for stability
    const double m = std::max(logits.at(i, 0), logits.at(i, 1));
    const double lse =
        m + std::log(std::exp(logits.at(i, 0) - m) + std::exp(logits.at(i, 1) - m));
    loss += lse - logits.at(i, y);
    if (grad) {
      for (int j = 0; j < 2; ++j) {
        grad->at(i, j) = (probs.at(i, j) - (j == y ? 1.0 : 0.0)) / n;
      }
    }
  }
  return loss / n;
}

double accuracy(std::span<const Prediction> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) throw ValidationError("prediction/label count mismatch");
  if (preds.empty()) return 0.0;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) ok += preds[i].label == labels[i];
  return static_cast<double>(ok) / static_cast<double>(preds.size());
}

namespace {

struct Evaluation {
  double loss = 0;
  double accuracy = 0;
};

Evaluation evaluate(Classifier& clf, const BatchSource& source, std::span<const int> labels,
                    const std::vector<std::size_t>& subset, int chunk) {
  Evaluation ev;
  if (subset.empty()) return ev;
  std::size_t correct = 0;
  double loss_sum = 0;
  for (std::size_t start = 0; start < subset.size(); start += static_cast<std::size_t>(chunk)) {
    const std::size_t end = std::min(subset.size(), start + static_cast<std::size_t>(chunk));
    std::span<const std::size_t> idx(subset.data() + start, end - start);
    std::vector<int> y;
    for (auto i : idx) y.push_back(labels[i]);
    const nn::Tensor logits = clf.logits(source(idx), nn::Context::infer());
    loss_sum += sparse_cross_entropy(logits, y) * static_cast<double>(idx.size());
    const nn::Tensor probs = softmax_rows(logits);
    for (int i = 0; i < probs.dim(0); ++i) {
      correct += argmax_label({probs.at(i, 0), probs.at(i, 1)}) == y[static_cast<std::size_t>(i)];
    }
  }
  ev.loss = loss_sum / static_cast<double>(subset.size());
  ev.accuracy = static_cast<double>(correct) / static_cast<double>(subset.size());
  return ev;
}

std::vector<nn::Tensor> snapshot(Classifier& clf) {
  std::vector<nn::Tensor> out;
  clf.for_each_parameter("", [&](const std::string&, nn::Parameter& p) { out.push_back(p.value); });
  return out;
}

void restore(Classifier& clf, const std::vector<nn::Tensor>& values) {
  std::size_t i = 0;
  clf.for_each_parameter("", [&](const std::string&, nn::Parameter& p) { p.value = values[i++]; });
}

}  // namespace

FinetuneResult finetune(Classifier& clf, const BatchSource& source, std::span<const int> labels,
                        const FinetuneConfig& cfg) {
  cfg.validate();
  if (labels.empty()) throw ValidationError("finetune needs labeled data");
  bool seen[2] = {false, false};
  for (int y : labels) {
    if (y != 0 && y != 1) throw ValidationError("labels must be 0 or 1");
    seen[y] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw ValidationError("training data contains a single class; both labels are required");
  }

  FinetuneResult result;
  result.split = stratified_split(labels, cfg.val_fraction, cfg.seed);
  const auto& train_idx = result.split.train;
  const auto& val_idx =
      result.split.validation.empty() ? result.split.train : result.split.validation;

  std::vector<nn::Parameter*> params;
  clf.backbone().for_each_parameter("", [&](const std::string&, nn::Parameter& p) {
    if (p.trainable && cfg.train_encoder) params.push_back(&p);
  });
  clf.head().for_each_parameter("", [&](const std::string&, nn::Parameter& p) {
    if (p.trainable) params.push_back(&p);
  });
  nn::Adam optimizer(params, nn::AdamOptions{cfg.lr});

  auto record = [&](int epoch) {
    const Evaluation tr = evaluate(clf, source, labels, train_idx, cfg.batch_size);
    const Evaluation va = evaluate(clf, source, labels, val_idx, cfg.batch_size);
    result.curve.push_back({epoch, tr.loss, tr.accuracy, va.loss, va.accuracy});
    return va.loss;
  };

  double best_loss = record(0);
  std::vector<nn::Tensor> best_weights = snapshot(clf);
  int since_best = 0;

  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order = train_idx;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      // A lone sample cannot form batch statistics.
      if (end - start < 2 && start > 0) break;
      std::span<const std::size_t> idx(order.data() + start, end - start);
      std::vector<int> y;
      for (auto i : idx) y.push_back(labels[i]);
      for (auto* p : params) p->grad.fill(0.0);
      const nn::Tensor logits = clf.logits(source(idx), nn::Context::train());
      nn::Tensor grad;
      const double loss = sparse_cross_entropy(logits, y, &grad);
      if (!std::isfinite(loss)) {
        throw NumericDomainError("non-finite fine-tuning loss at epoch " + std::to_string(epoch));
      }
      if (cfg.train_encoder) {
        clf.backward(grad);
      } else {
        clf.head().backward(grad);
        clf.backbone().clear_trace();
      }
      optimizer.step();
    }
    const double val_loss = record(epoch);
    if (val_loss < best_loss) {
      best_loss = val_loss;
      best_weights = snapshot(clf);
      result.best_epoch = epoch;
      since_best = 0;
    } else if (cfg.patience > 0 && ++since_best >= cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }
  restore(clf, best_weights);
  clf.clear_trace();
  return result;
}

FinetuneResult finetune(Classifier& clf, const nn::Tensor& inputs, std::span<const int> labels,
                        const FinetuneConfig& cfg) {
  if (inputs.rank() != 4) throw ValidationError("finetune inputs must be N×C×H×W");
  const int c = inputs.dim(1), h = inputs.dim(2), w = inputs.dim(3);
  const std::size_t row = static_cast<std::size_t>(c) * h * w;
  BatchSource source = [&](std::span<const std::size_t> idx) {
    nn::Tensor batch({static_cast<int>(idx.size()), c, h, w});
    for (std::size_t k = 0; k < idx.size(); ++k) {
      std::copy_n(inputs.data() + idx[k] * row, row, batch.data() + k * row);
    }
    return batch;
  };
  return finetune(clf, source, labels, cfg);
}

FinetuneResult finetune(Classifier& clf, std::span<const data::ThermalImage> images,
                        const FinetuneConfig& cfg) {
  std::vector<Image> resized;
  std::vector<int> labels;
  for (const auto& img : images) {
    if (!img.label) throw ValidationError("image '" + img.id + "' has no label");
    labels.push_back(data::to_int(*img.label));
    resized.push_back(resize_bilinear(img.pixels, clf.input_size(), clf.input_size()));
  }
  const int size = clf.input_size();
  BatchSource source = [&](std::span<const std::size_t> idx) {
    std::vector<Image> batch;
    for (auto i : idx) batch.push_back(resized[i]);
    return ssl::images_to_batch(batch, size);
  };
  return finetune(clf, source, labels, cfg);
}

}  // namespace hotspot::detect
