#include "cli/commands.hpp"
#include "hotspot/baselines/segmenters.hpp"
#include "hotspot/common/error.hpp"
#include "hotspot/common/png_io.hpp"
#include "hotspot/metrics/dice.hpp"

namespace hotspot::cli {

namespace fs = std::filesystem;

Command baseline_command() {
  Command c;
  c.name = "baseline";
  c.summary = "classical hotspot segmentation (kmeans_lab, kmeans_pv, hsv, otsu)";
  c.fields = {
      {"method", Kind::kString, nullptr, "kmeans_lab, kmeans_pv, hsv or otsu"},
      {"data", Kind::kString, "", "dataset root"},
      {"manifest", Kind::kString, "", "manifest path [<data>/manifest.csv]"},
      {"k", Kind::kInt, 2, "clusters for kmeans_lab"},
      {"bbox", Kind::kString, "", "y,x,height,width for kmeans_pv; empty = whole image"},
      {"hsv_lower", Kind::kString, "", "h,s,v lower bound for hsv (h in degrees)"},
      {"hsv_upper", Kind::kString, "", "h,s,v upper bound for hsv"},
      {"n_thresholds", Kind::kInt, 4, "multilevel Otsu thresholds"},
      {"opening_radius", Kind::kInt, 1, "disk radius of the Otsu opening"},
      {"subset", Kind::kString, "anomalous", "anomalous or all"},
  };
  c.plan = [](const nlohmann::json& cfg) -> Job {
    const baselines::Method method = baselines::parse_method(cfg.at("method").get<std::string>());
    const DatasetRef ref = dataset_ref(cfg);
    const int k = cfg.at("k").get<int>();
    const auto seed = cfg.at("seed").get<std::uint64_t>();
    std::optional<baselines::BBox> bbox;
    if (!cfg.at("bbox").get<std::string>().empty()) {
      const auto v = parse_numbers(cfg.at("bbox").get<std::string>(), 4, "bbox");
      bbox = baselines::BBox{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]),
                             static_cast<int>(v[3])};
    }
    baselines::Hsv lower, upper;
    if (method == baselines::Method::kHsvThreshold) {
      if (cfg.at("hsv_lower").get<std::string>().empty() || cfg.at("hsv_upper").get<std::string>().empty()) {
        throw UsageError("hsv needs --hsv-lower and --hsv-upper");
      }
      const auto lo = parse_numbers(cfg.at("hsv_lower").get<std::string>(), 3, "hsv_lower");
      const auto hi = parse_numbers(cfg.at("hsv_upper").get<std::string>(), 3, "hsv_upper");
      lower = {lo[0], lo[1], lo[2]};
      upper = {hi[0], hi[1], hi[2]};
      hsv_threshold_segment(Image(1, 1, 3), lower, upper);  // validates the bounds
    }
    if (method == baselines::Method::kKmeansLab && k < 2) throw UsageError("--k must be at least 2");
    const int n_thresholds = cfg.at("n_thresholds").get<int>();
    const int radius = cfg.at("opening_radius").get<int>();
    if (n_thresholds < 1 || n_thresholds > 4) throw UsageError("--n-thresholds must lie in [1,4]");
    if (radius < 0) throw UsageError("--opening-radius must be non-negative");
    const std::string subset = cfg.at("subset").get<std::string>();
    if (subset != "anomalous" && subset != "all") throw UsageError("--subset must be anomalous or all");

    return [=](const fs::path& out) {
      const auto images = select_subset(data::load_dataset(ref.root, ref.manifest), subset);
      std::vector<DiceRow> dice;
      int failures = 0;
      for (const auto& img : images) {
        Mask mask(img.pixels.height, img.pixels.width);
        std::string status = "ok";
        try {
          switch (method) {
            case baselines::Method::kKmeansLab:
              mask = baselines::kmeans_lab_segment(img.pixels, k, seed).mask;
              break;
            case baselines::Method::kKmeansPv:
              mask = baselines::kmeans_pv_segment(
                         img.pixels, bbox.value_or(baselines::BBox{0, 0, img.pixels.height, img.pixels.width}),
                         seed)
                         .mask;
              break;
            case baselines::Method::kHsvThreshold:
              mask = baselines::hsv_threshold_segment(img.pixels, lower, upper).mask;
              break;
            case baselines::Method::kMultilevelOtsu:
              mask = baselines::multilevel_otsu_segment(img.pixels, n_thresholds, radius).mask;
              break;
          }
        } catch (const SegmentationFailure& e) {
          status = "failed";
          ++failures;
          log_line(img.id + ": " + e.what());
        } catch (const ValidationError& e) {
          status = "failed";
          ++failures;
          log_line(img.id + ": " + e.what());
        }
        write_png(out / ("mask_" + img.id + ".png"), mask_to_bytes(mask));
        if (img.mask) dice.push_back({img.id, metrics::dice_compare(mask, *img.mask), status});
      }
      nlohmann::json summary = {{"method", baselines::to_string(method)},
                                {"images", images.size()},
                                {"failures", failures}};
      if (!dice.empty()) summary["dice"] = write_dice_report(out, dice);
      return summary;
    };
  };
  return c;
}

}  // namespace hotspot::cli
