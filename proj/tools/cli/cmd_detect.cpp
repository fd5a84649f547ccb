#include <cstdio>
#include <fstream>

#include "cli/commands.hpp"
#include "hotspot/common/error.hpp"
#include "hotspot/detect/ensemble.hpp"
#include "hotspot/detect/finetune.hpp"
#include "hotspot/metrics/predictions.hpp"
#include "hotspot/ssl/checkpoint.hpp"

namespace hotspot::cli {

namespace fs = std::filesystem;

namespace {

void write_curve(const fs::path& path, const std::vector<detect::EpochMetrics>& curve) {
  std::ofstream out(path);
  out << "epoch,train_loss,train_accuracy,val_loss,val_accuracy\n";
  char buf[200];
  for (const auto& m : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g,%.10g\n", m.epoch, m.train_loss,
                  m.train_accuracy, m.val_loss, m.val_accuracy);
    out << buf;
  }
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

std::vector<Image> pixels_of(const std::vector<data::ThermalImage>& images) {
  std::vector<Image> out;
  out.reserve(images.size());
  for (const auto& img : images) out.push_back(img.pixels);
  return out;
}

std::vector<int> labels_of(const std::vector<data::ThermalImage>& images, const std::string& what) {
  std::vector<int> out;
  for (const auto& img : images) {
    if (!img.label) throw ValidationError(what + " image '" + img.id + "' has no label");
    out.push_back(data::to_int(*img.label));
  }
  return out;
}

}  // namespace

Command finetune_command() {
  Command c;
  c.name = "finetune";
  c.summary = "fine-tune a pre-trained (or random) encoder into a 2-way classifier";
  c.fields = {
      {"data", Kind::kString, "", "labelled dataset root"},
      {"manifest", Kind::kString, "", "manifest path [<data>/manifest.csv]"},
      {"checkpoint", Kind::kString, "", "pre-training checkpoint; empty = random initialization"},
      {"epochs", Kind::kInt, 200, "maximum epochs"},
      {"batch_size", Kind::kInt, 16, "images per step"},
      {"lr", Kind::kNumber, 1e-3, "Adam learning rate"},
      {"patience", Kind::kInt, 10, "early stopping patience on validation loss; 0 = off"},
      {"val_fraction", Kind::kNumber, 0.2, "stratified validation share"},
      {"train_encoder", Kind::kBool, true, "update the backbone as well as the head"},
  };
  for (auto& f : encoder_fields()) c.fields.push_back(f);

  c.plan = [](const nlohmann::json& cfg) -> Job {
    const DatasetRef ref = dataset_ref(cfg);
    std::optional<fs::path> checkpoint;
    if (!cfg.at("checkpoint").get<std::string>().empty()) checkpoint = existing_file(cfg, "checkpoint");
    const ssl::EncoderConfig random_cfg = encoder_config(cfg);
    detect::FinetuneConfig fc;
    fc.epochs = cfg.at("epochs").get<int>();
    fc.batch_size = cfg.at("batch_size").get<int>();
    fc.lr = cfg.at("lr").get<double>();
    fc.patience = cfg.at("patience").get<int>();
    fc.val_fraction = cfg.at("val_fraction").get<double>();
    fc.train_encoder = cfg.at("train_encoder").get<bool>();
    fc.seed = cfg.at("seed").get<std::uint64_t>();
    fc.validate();

    return [ref, checkpoint, random_cfg, fc](const fs::path& out) {
      const auto images = data::load_dataset(ref.root, ref.manifest);
      nn::Init rng(fc.seed);
      std::unique_ptr<ssl::Encoder> encoder;
      if (checkpoint) {
        encoder = std::move(ssl::load_ssl_checkpoint(*checkpoint).encoder);
      } else {
        encoder = std::make_unique<ssl::Encoder>(random_cfg, rng);
      }
      detect::Classifier clf = detect::Classifier::from_encoder(*encoder, rng);
      clf.provenance = checkpoint ? checkpoint->filename().string() : "random";
      const detect::FinetuneResult res = detect::finetune(clf, images, fc);
      for (const auto& m : res.curve) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "epoch %d train_loss %.5f val_loss %.5f val_acc %.4f",
                      m.epoch, m.train_loss, m.val_loss, m.val_accuracy);
        log_line(buf);
      }
      detect::save_classifier(out / "classifier.hspa", clf);
      write_curve(out / "curve.csv", res.curve);
      nlohmann::json summary = {{"init", clf.provenance},
                                {"best_epoch", res.best_epoch},
                                {"stopped_early", res.stopped_early},
                                {"val_accuracy", res.best().val_accuracy},
                                {"val_loss", res.best().val_loss},
                                {"train_images", res.split.train.size()},
                                {"val_images", res.split.validation.size()}};
      write_json(out / "summary.json", summary);
      return summary;
    };
  };
  return c;
}

Command classify_command() {
  Command c;
  c.name = "classify";
  c.summary = "label images with one classifier or a weighted two-member ensemble";
  c.fields = {
      {"data", Kind::kString, "", "dataset root"},
      {"manifest", Kind::kString, "", "manifest path [<data>/manifest.csv]"},
      {"model", Kind::kString, "", "classifier archive"},
      {"model_b", Kind::kString, "", "second ensemble member"},
      {"weight", Kind::kNumber, -1.0, "weight of the first member; negative = grid search"},
      {"tune_data", Kind::kString, "", "labelled dataset root for the weight grid search"},
      {"tune_manifest", Kind::kString, "", "manifest for the grid search [<tune_data>/manifest.csv]"},
  };
  c.plan = [](const nlohmann::json& cfg) -> Job {
    const DatasetRef ref = dataset_ref(cfg);
    const fs::path model = existing_file(cfg, "model");
    std::optional<fs::path> model_b;
    if (!cfg.at("model_b").get<std::string>().empty()) model_b = existing_file(cfg, "model_b");
    const double weight = cfg.at("weight").get<double>();
    if (weight > 1.0) throw UsageError("--weight must lie in [0,1]");
    std::optional<DatasetRef> tune;
    if (model_b && weight < 0) {
      if (cfg.at("tune_data").get<std::string>().empty()) {
        throw UsageError("an ensemble without --weight needs --tune-data for the grid search");
      }
      tune = dataset_ref(cfg, "tune_data", "tune_manifest");
    }

    return [ref, model, model_b, weight, tune](const fs::path& out) {
      const auto images = data::load_dataset(ref.root, ref.manifest);
      const auto pixels = pixels_of(images);
      detect::Classifier c1 = detect::load_classifier(model);
      std::vector<detect::Prediction> preds = c1.classify_all(pixels);
      nlohmann::json summary = {{"images", images.size()}};
      if (model_b) {
        detect::Classifier c2 = detect::load_classifier(*model_b);
        double w = weight;
        nlohmann::json ens = {{"model", model.filename().string()},
                              {"model_b", model_b->filename().string()}};
        if (tune) {
          const auto tune_images = data::load_dataset(tune->root, tune->manifest);
          const auto tune_pixels = pixels_of(tune_images);
          const auto labels = labels_of(tune_images, "grid search");
          const auto grid = detect::grid_search_weight(c1.classify_all(tune_pixels),
                                                       c2.classify_all(tune_pixels), labels);
          w = grid.weight;
          ens["grid_accuracy"] = grid.accuracy;
          ens["grid_accuracies"] = grid.accuracies;
          ens["tune_images"] = tune_images.size();
        }
        ens["weight"] = w;
        const auto second = c2.classify_all(pixels);
        for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = detect::combine(preds[i], second[i], w);
        write_json(out / "ensemble.json", ens);
        summary["weight"] = w;
      }
      std::vector<metrics::PredictionRow> rows;
      int anomalous = 0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        rows.push_back({images[i].id, preds[i].label, preds[i].probs[0], preds[i].probs[1]});
        anomalous += preds[i].label;
      }
      metrics::write_predictions(out / "predictions.csv", rows);
      summary["predicted_anomalous"] = anomalous;
      return summary;
    };
  };
  return c;
}

}  // namespace hotspot::cli
