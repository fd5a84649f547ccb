#include <cstdio>

#include "cli/commands.hpp"
#include "hotspot/ssl/checkpoint.hpp"
#include "hotspot/ssl/train.hpp"

namespace hotspot::cli {

std::vector<Field> encoder_fields() {
  return {
      {"backbone", Kind::kString, "xception", "xception or tiny"},
      {"projection_dim", Kind::kInt, 2048, "projection and predictor output width"},
      {"input_size", Kind::kInt, 224, "square network input side"},
  };
}

ssl::EncoderConfig encoder_config(const nlohmann::json& cfg) {
  ssl::EncoderConfig ec;
  ec.backbone = ssl::parse_backbone(cfg.at("backbone").get<std::string>());
  ec.projection_dim = cfg.at("projection_dim").get<int>();
  ec.input_size = cfg.at("input_size").get<int>();
  if (ec.projection_dim < 1) throw UsageError("--projection-dim must be positive");
  const int min_size = ec.backbone == ssl::Backbone::kXception ? 71 : 8;
  if (ec.input_size < min_size) {
    throw UsageError("--input-size must be at least " + std::to_string(min_size) + " for " +
                     ssl::to_string(ec.backbone));
  }
  return ec;
}

Command train_ssl_command() {
  Command c;
  c.name = "train-ssl";
  c.summary = "Siamese self-supervised pre-training of an encoder";
  c.fields = {
      {"data", Kind::kString, "", "dataset root"},
      {"manifest", Kind::kString, "", "manifest path [<data>/manifest.csv]"},
      {"predictor_hidden", Kind::kInt, 512, "predictor bottleneck width"},
      {"batch_size", Kind::kInt, 81, "images per step"},
      {"lr", Kind::kNumber, 0.001, "SGD learning rate"},
      {"momentum", Kind::kNumber, 0.6, "SGD momentum"},
      {"epochs", Kind::kInt, 200, "training epochs"},
      {"early_stop_patience", Kind::kInt, 0, "epochs without improvement before stopping; 0 = off"},
      {"early_stop_min_delta", Kind::kNumber, 0.0, "required loss improvement"},
      {"loss", Kind::kString, "compound", "compound or regular"},
      {"beta", Kind::kNumber, 2.0 / 3.0, "cross-entropy weight of the compound loss"},
      {"translate", Kind::kNumber, 0.1, "max shift as a fraction of the side"},
      {"flip_prob", Kind::kNumber, 0.5, "horizontal flip probability"},
      {"blur_sigma_max", Kind::kNumber, 1.5, "upper bound of the blur sigma in pixels"},
      {"jitter", Kind::kNumber, 0.2, "contrast and gain jitter strength"},
      {"drop_color_prob", Kind::kNumber, 0.2, "probability of converting a view to gray"},
      {"rotate_max_deg", Kind::kNumber, 15.0, "max rotation in degrees"},
      {"limit", Kind::kInt, 0, "use only the first N manifest rows; 0 = all"},
  };
  for (auto& f : encoder_fields()) c.fields.push_back(f);

  c.plan = [](const nlohmann::json& cfg) -> Job {
    const DatasetRef ref = dataset_ref(cfg);
    ssl::SslCheckpoint meta;
    meta.encoder = encoder_config(cfg);
    meta.predictor.dim = meta.encoder.projection_dim;
    meta.predictor.hidden = cfg.at("predictor_hidden").get<int>();
    if (meta.predictor.hidden < 1) throw UsageError("--predictor-hidden must be positive");
    meta.train.batch_size = cfg.at("batch_size").get<int>();
    meta.train.lr = cfg.at("lr").get<double>();
    meta.train.momentum = cfg.at("momentum").get<double>();
    meta.train.epochs = cfg.at("epochs").get<int>();
    meta.train.early_stop_patience = cfg.at("early_stop_patience").get<int>();
    meta.train.early_stop_min_delta = cfg.at("early_stop_min_delta").get<double>();
    meta.train.seed = cfg.at("seed").get<std::uint64_t>();
    meta.train.validate();
    meta.loss.variant = ssl::parse_loss_variant(cfg.at("loss").get<std::string>());
    meta.loss.beta = cfg.at("beta").get<double>();
    meta.loss.validate();
    meta.augment.translate_max_frac = cfg.at("translate").get<double>();
    meta.augment.flip_prob = cfg.at("flip_prob").get<double>();
    meta.augment.blur_sigma_hi = cfg.at("blur_sigma_max").get<double>();
    meta.augment.jitter_strength = cfg.at("jitter").get<double>();
    meta.augment.drop_color_prob = cfg.at("drop_color_prob").get<double>();
    meta.augment.rotate_max_deg = cfg.at("rotate_max_deg").get<double>();
    meta.augment.seed = meta.train.seed;
    const data::AugmentPolicy policy(meta.augment);
    const int limit = cfg.at("limit").get<int>();
    if (limit < 0) throw UsageError("--limit must be non-negative");

    return [ref, meta, policy, limit](const std::filesystem::path& out) {
      std::vector<data::ThermalImage> images = data::load_dataset(ref.root, ref.manifest);
      if (limit > 0 && static_cast<std::size_t>(limit) < images.size()) images.resize(static_cast<std::size_t>(limit));
      nn::Init rng(meta.train.seed);
      ssl::Encoder encoder(meta.encoder, rng);
      ssl::Predictor predictor(meta.predictor, rng);
      const ssl::TrainResult result = ssl::ssl_train(
          encoder, predictor, images, meta.train, meta.loss, policy, [](const ssl::EpochStats& s) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "epoch %d loss %.6f collapse_std %.4f", s.epoch, s.loss,
                          s.collapse_std);
            log_line(buf);
          });
      ssl::save_ssl_checkpoint(out / "checkpoint.hspa", meta, encoder, predictor);
      ssl::write_history_csv((out / "history.csv").string(), result.history);
      nlohmann::json summary = {{"images", images.size()},
                                {"epochs_run", result.history.size()},
                                {"stopped_early", result.stopped_early}};
      if (!result.history.empty()) {
        summary["initial_loss"] = result.history.front().loss;
        summary["final_loss"] = result.history.back().loss;
        summary["final_collapse_std"] = result.history.back().collapse_std;
      }
      write_json(out / "summary.json", summary);
      return summary;
    };
  };
  return c;
}

}  // namespace hotspot::cli
