#include "cli/commands.hpp"
#include "hotspot/data/synthetic.hpp"

namespace hotspot::cli {

Command gen_data_command() {
  Command c;
  c.name = "gen-data";
  c.summary = "render a seeded synthetic thermal dataset with hotspot masks";
  c.fields = {
      {"n_images", Kind::kInt, 100, "number of images"},
      {"anomalous_fraction", Kind::kNumber, 0.5, "share of images with hotspots"},
      {"height", Kind::kInt, 240, "image height"},
      {"width", Kind::kInt, 320, "image width"},
      {"shapes", Kind::kString, "rectangle,triangle,oval,rhombus", "plate shapes to draw from"},
      {"hotspots", Kind::kString, "1,2,3", "hotspot counts to draw from for anomalous images"},
  };
  c.plan = [](const nlohmann::json& cfg) -> Job {
    data::SyntheticConfig sc;
    sc.n_images = cfg.at("n_images").get<int>();
    sc.anomalous_fraction = cfg.at("anomalous_fraction").get<double>();
    sc.height = cfg.at("height").get<int>();
    sc.width = cfg.at("width").get<int>();
    sc.seed = cfg.at("seed").get<std::uint64_t>();
    sc.shapes.clear();
    for (const auto& s : split_list(cfg.at("shapes").get<std::string>())) {
      sc.shapes.push_back(data::parse_plate_shape(s));
    }
    sc.hotspots_per_anomalous.clear();
    for (double v : parse_numbers(cfg.at("hotspots").get<std::string>(),
                                  split_list(cfg.at("hotspots").get<std::string>()).size(),
                                  "hotspots")) {
      sc.hotspots_per_anomalous.push_back(static_cast<int>(v));
      if (v != static_cast<int>(v)) throw UsageError("--hotspots expects integers");
    }
    sc.validate();
    return [sc](const std::filesystem::path& out) {
      const data::SyntheticDataset ds = data::generate_synthetic_dataset(sc);
      data::write_dataset(out, ds.images);
      write_json(out / "gen_config.json", data::to_json(ds));
      int anomalous = 0;
      for (const auto& img : ds.images) anomalous += img.label == data::Label::kAnomalous;
      return nlohmann::json{{"images", ds.images.size()}, {"anomalous", anomalous}};
    };
  };
  return c;
}

}  // namespace hotspot::cli
