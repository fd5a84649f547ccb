#include "cli/commands.hpp"
#include "hotspot/common/png_io.hpp"
#include "hotspot/isolate/overlay.hpp"
#include "hotspot/metrics/dice.hpp"

namespace hotspot::cli {

namespace fs = std::filesystem;

Command isolate_command() {
  Command c;
  c.name = "isolate";
  c.summary = "GradCAM heatmaps and thresholded hotspot regions";
  c.fields = {
      {"data", Kind::kString, "", "dataset root"},
      {"manifest", Kind::kString, "", "manifest path [<data>/manifest.csv]"},
      {"model", Kind::kString, "", "classifier archive"},
      {"class_index", Kind::kInt, 1, "class whose score is attributed (1 = anomalous)"},
      {"threshold", Kind::kNumber, 0.5, "fraction of the heatmap maximum kept"},
      {"min_area", Kind::kInt, 20, "smallest kept component in pixels"},
      {"subset", Kind::kString, "anomalous", "anomalous, predicted or all"},
      {"overlays", Kind::kBool, false, "also write overlay_<id>.png composites"},
  };
  c.plan = [](const nlohmann::json& cfg) -> Job {
    const DatasetRef ref = dataset_ref(cfg);
    const fs::path model = existing_file(cfg, "model");
    const int class_index = cfg.at("class_index").get<int>();
    if (class_index != 0 && class_index != 1) throw UsageError("--class-index must be 0 or 1");
    isolate::IsolationParams params;
    params.threshold = cfg.at("threshold").get<double>();
    params.min_area = cfg.at("min_area").get<int>();
    if (!(params.threshold > 0 && params.threshold < 1)) throw UsageError("--threshold must lie in (0,1)");
    if (params.min_area < 0) throw UsageError("--min-area must be non-negative");
    const std::string subset = cfg.at("subset").get<std::string>();
    if (subset != "anomalous" && subset != "predicted" && subset != "all") {
      throw UsageError("--subset must be anomalous, predicted or all");
    }
    const bool overlays = cfg.at("overlays").get<bool>();

    return [=](const fs::path& out) {
      detect::Classifier clf = detect::load_classifier(model);
      auto images = data::load_dataset(ref.root, ref.manifest);
      if (subset == "predicted") {
        std::vector<data::ThermalImage> kept;
        for (auto& img : images) {
          if (clf.classify(img.pixels).label == 1) kept.push_back(std::move(img));
        }
        images = std::move(kept);
      } else {
        images = select_subset(std::move(images), subset);
      }
      std::vector<DiceRow> dice;
      for (const auto& img : images) {
        const isolate::Heatmap hm = isolate::gradcam_heatmap(clf, img.pixels, class_index, img.id);
        const isolate::HotspotRegion region = isolate::isolate_hotspots(hm, params);
        write_png(out / ("heatmap_" + img.id + ".png"), isolate::heatmap_to_bytes(hm));
        write_png(out / ("mask_" + img.id + ".png"), mask_to_bytes(region.mask));
        write_json(out / ("regions_" + img.id + ".json"), isolate::to_json(region));
        if (overlays) isolate::write_overlay(out / ("overlay_" + img.id + ".png"), img.pixels, hm, region);
        if (img.mask) dice.push_back({img.id, metrics::dice_compare(region.mask, *img.mask)});
      }
      nlohmann::json summary = {{"images", images.size()}};
      if (!dice.empty()) summary["dice"] = write_dice_report(out, dice);
      return summary;
    };
  };
  return c;
}

}  // namespace hotspot::cli
