#include "hotspot/ssl/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "hotspot/nn/optim.hpp"

namespace hotspot::ssl {

namespace {

std::string diverged_message(int epoch, int step, double sim, double ce) {
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "non-finite loss at epoch %d step %d (similarity=%g, cross_entropy=%g)", epoch,
                step, sim, ce);
  return buf;
}

}  // namespace

TrainingDiverged::TrainingDiverged(int e, int s, double sim, double ce)
    : NumericDomainError(diverged_message(e, s, sim, ce)),
      epoch(e),
      step(s),
      similarity(sim),
      cross_entropy(ce) {}

void TrainConfig::validate() const {
  if (batch_size < 2) throw ValidationError("batch_size must be at least 2");
  if (!(lr >= 0.0)) throw ValidationError("lr must be non-negative");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ValidationError("momentum must lie in [0,1)");
  if (epochs < 0) throw ValidationError("epochs must be non-negative");
  if (early_stop_patience < 0) throw ValidationError("early_stop_patience must be non-negative");
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {{"batch_size", cfg.batch_size},
          {"lr", cfg.lr},
          {"momentum", cfg.momentum},
          {"epochs", cfg.epochs},
          {"early_stop_patience", cfg.early_stop_patience},
          {"early_stop_min_delta", cfg.early_stop_min_delta},
          {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.batch_size = j.at("batch_size").get<int>();
  cfg.lr = j.at("lr").get<double>();
  cfg.momentum = j.at("momentum").get<double>();
  cfg.epochs = j.at("epochs").get<int>();
  cfg.early_stop_patience = j.value("early_stop_patience", 0);
  cfg.early_stop_min_delta = j.value("early_stop_min_delta", 0.0);
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

nlohmann::json to_json(const LossConfig& cfg) {
  return {{"variant", to_string(cfg.variant)}, {"beta", cfg.beta}};
}

LossConfig loss_config_from_json(const nlohmann::json& j) {
  LossConfig cfg;
  cfg.variant = parse_loss_variant(j.at("variant").get<std::string>());
  cfg.beta = j.at("beta").get<double>();
  return cfg;
}

double collapse_monitor(const nn::Tensor& z) {
  const int n = z.dim(0), d = z.dim(1);
  if (n < 2) return 0.0;
  nn::RowMatrix normalized = z.matrix();
  for (int i = 0; i < n; ++i) {
    const double norm = normalized.row(i).norm();
    if (norm > 0) normalized.row(i) /= norm;
  }
  const Eigen::RowVectorXd mean = normalized.colwise().mean();
  const Eigen::RowVectorXd var =
      (normalized.rowwise() - mean).array().square().colwise().sum() / n;
  return var.array().sqrt().sum() / d;
}

TrainResult ssl_train(Encoder& encoder, Predictor& predictor,
                      std::span<const data::ThermalImage> images, const TrainConfig& tcfg,
                      const LossConfig& lcfg, const data::AugmentPolicy& policy,
                      const EpochObserver& on_epoch) {
  tcfg.validate();
  lcfg.validate();
  if (images.empty()) throw ValidationError("ssl_train needs at least one image");
  if (static_cast<std::size_t>(tcfg.batch_size) > images.size()) {
    throw ValidationError("batch_size exceeds the number of training images");
  }
  if (encoder.config().projection_dim != predictor.config().dim) {
    throw ValidationError("predictor dimension must equal the projection dimension");
  }
  const int size = encoder.config().input_size;

  std::vector<Image> resized;
  resized.reserve(images.size());
  for (const auto& img : images) {
    data::validate(img);
    resized.push_back(resize_bilinear(img.pixels, size, size));
  }

  std::vector<nn::Parameter*> params = [&] {
    std::vector<nn::Parameter*> out;
    auto collect = [&](const std::string&, nn::Parameter& p) {
      if (p.trainable) out.push_back(&p);
    };
    encoder.for_each_parameter("", collect);
    predictor.for_each_parameter("", collect);
    return out;
  }();
  nn::Sgd optimizer(params, tcfg.lr, tcfg.momentum);

  data::Rng rng(tcfg.seed);
  std::vector<std::size_t> order(resized.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochStats stats;
    stats.epoch = epoch;
    int steps = 0;
    for (std::size_t start = 0; start + 2 <= order.size();
         start += static_cast<std::size_t>(tcfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(tcfg.batch_size));
      if (end - start < 2) break;
      std::vector<Image> v1, v2;
      for (std::size_t k = start; k < end; ++k) {
        v1.push_back(data::augment_resized(resized[order[k]], policy, rng));
        v2.push_back(data::augment_resized(resized[order[k]], policy, rng));
      }
      const nn::Tensor x1 = images_to_batch(v1, size);
      const nn::Tensor x2 = images_to_batch(v2, size);

      for (auto* p : params) p->grad.fill(0.0);
      const nn::Tensor z1 = encoder.forward(x1, nn::Context::train());
      const nn::Tensor z2 = encoder.forward(x2, nn::Context::train());
      const nn::Tensor p1 = predictor.forward(z1, nn::Context::train());
      const nn::Tensor p2 = predictor.forward(z2, nn::Context::train());

      BatchLoss loss;
      try {
        loss = batch_loss(p1, z1, p2, z2, lcfg);
      } catch (const NumericDomainError&) {
        throw TrainingDiverged(epoch, steps, std::nan(""), std::nan(""));
      }
      if (!std::isfinite(loss.total)) {
        throw TrainingDiverged(epoch, steps, loss.similarity, loss.cross_entropy);
      }

      // Unwind in reverse call order. z1/z2 only receive gradient through
      // the predictor, never as loss targets.
      const nn::Tensor dz2 = predictor.backward(loss.grad_p2);
      const nn::Tensor dz1 = predictor.backward(loss.grad_p1);
      encoder.backward(dz2);
      encoder.backward(dz1);
      optimizer.step();

      stats.loss += loss.total;
      stats.similarity += loss.similarity;
      stats.cross_entropy += loss.cross_entropy;
      stats.collapse_std += collapse_monitor(z1);
      ++steps;
    }
    if (steps > 0) {
      stats.loss /= steps;
      stats.similarity /= steps;
      stats.cross_entropy /= steps;
      stats.collapse_std /= steps;
    }
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);

    if (tcfg.early_stop_patience > 0) {
      if (stats.loss < best - tcfg.early_stop_min_delta) {
        best = stats.loss;
        since_best = 0;
      } else if (++since_best >= tcfg.early_stop_patience) {
        result.stopped_early = true;
        break;
      }
    }
  }
  encoder.clear_trace();
  predictor.clear_trace();
  return result;
}

void write_history_csv(const std::string& path, std::span<const EpochStats> history) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "epoch,loss,collapse_std\n";
  char buf[128];
  for (const auto& h : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g\n", h.epoch, h.loss, h.collapse_std);
    out << buf;
  }
}

}  // namespace hotspot::ssl
