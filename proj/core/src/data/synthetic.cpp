#include "hotspot/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>

#include "hotspot/common/error.hpp"

namespace hotspot::data {

namespace {

constexpr int kMaxPlacementTries = 400;

std::mt19937_64 image_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x7d1au};
  return std::mt19937_64(seq);
}

std::string image_id(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "syn_%05d", index);
  return buf;
}

// Plate proportions (height/width of the sheet's own frame).
void plate_proportions(PlateShape shape, double& rel_h, double& rel_w) {
  switch (shape) {
    case PlateShape::kRectangle: rel_h = 33.0; rel_w = 55.0; break;
    case PlateShape::kTriangle: rel_h = 52.0; rel_w = 38.0; break;
    case PlateShape::kOval: rel_h = 32.0; rel_w = 38.0; break;
    case PlateShape::kRhombus: rel_h = 36.8; rel_w = 36.8; break;  // side 26, as diagonals
  }
}

bool disk_inside_plate(const PlateRecord& plate, const BlobRecord& blob, int h, int w) {
  const double r = blob.sigma * std::sqrt(2.0 * std::numbers::ln2);
  const int y0 = static_cast<int>(std::floor(blob.center_y - r)) - 1;
  const int y1 = static_cast<int>(std::ceil(blob.center_y + r)) + 1;
  const int x0 = static_cast<int>(std::floor(blob.center_x - r)) - 1;
  const int x1 = static_cast<int>(std::ceil(blob.center_x + r)) + 1;
  if (y0 < 0 || x0 < 0 || y1 >= h || x1 >= w) return false;
  bool any = false;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!blob_covers(blob, y, x)) continue;
      any = true;
      if (!plate_contains(plate, y, x)) return false;
    }
  }
  return any;
}

}  // namespace

std::string to_string(PlateShape shape) {
  switch (shape) {
    case PlateShape::kRectangle: return "rectangle";
    case PlateShape::kTriangle: return "triangle";
    case PlateShape::kOval: return "oval";
    case PlateShape::kRhombus: return "rhombus";
  }
  return "unknown";
}

PlateShape parse_plate_shape(const std::string& name) {
  if (name == "rectangle") return PlateShape::kRectangle;
  if (name == "triangle") return PlateShape::kTriangle;
  if (name == "oval") return PlateShape::kOval;
  if (name == "rhombus") return PlateShape::kRhombus;
  throw ValidationError("unknown plate shape '" + name + "'");
}

void SyntheticConfig::validate() const {
  if (n_images < 1) throw ValidationError("n_images must be at least 1");
  if (shapes.empty()) throw ValidationError("shapes must be non-empty");
  if (hotspots_per_anomalous.empty()) {
    throw ValidationError("hotspots_per_anomalous must be non-empty");
  }
  for (int k : hotspots_per_anomalous) {
    if (k < 1 || k > 3) throw ValidationError("hotspots_per_anomalous entries must be 1, 2 or 3");
  }
  if (!(anomalous_fraction >= 0.0 && anomalous_fraction <= 1.0)) {
    throw ValidationError("anomalous_fraction must lie in [0,1]");
  }
  if (height < 32 || width < 32) throw ValidationError("image_size must be at least 32x32");
}

bool plate_contains(const PlateRecord& p, double y, double x) {
  const double dy = y - p.center_y;
  const double dx = x - p.center_x;
  const double c = std::cos(p.angle), s = std::sin(p.angle);
  const double u = c * dx + s * dy;   // along width
  const double v = -s * dx + c * dy;  // along height
  const double a = p.half_width, b = p.half_height;
  switch (p.shape) {
    case PlateShape::kRectangle:
      return std::abs(u) <= a && std::abs(v) <= b;
    case PlateShape::kOval:
      return (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
    case PlateShape::kRhombus:
      return std::abs(u) / a + std::abs(v) / b <= 1.0;
    case PlateShape::kTriangle:
      // apex at v = -b, base at v = +b
      return v >= -b && v <= b && std::abs(u) <= a * (v + b) / (2.0 * b);
  }
  return false;
}

bool blob_covers(const BlobRecord& blob, double y, double x) {
  const double dy = y - blob.center_y, dx = x - blob.center_x;
  return dy * dy + dx * dx <= 2.0 * std::numbers::ln2 * blob.sigma * blob.sigma;
}

SyntheticDataset generate_synthetic_dataset(const SyntheticConfig& cfg) {
  cfg.validate();
  SyntheticDataset ds;
  ds.config = cfg;

  const int n_anomalous =
      static_cast<int>(std::lround(cfg.n_images * cfg.anomalous_fraction));
  std::vector<int> order(static_cast<std::size_t>(cfg.n_images));
  std::iota(order.begin(), order.end(), 0);
  {
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<bool> anomalous(order.size(), false);
  for (int i = 0; i < n_anomalous; ++i) anomalous[static_cast<std::size_t>(order[i])] = true;

  const int h = cfg.height, w = cfg.width;
  const double side = std::min(h, w);
  using Uniform = std::uniform_real_distribution<double>;

  for (int index = 0; index < cfg.n_images; ++index) {
    auto rng = image_rng(cfg.seed, index);
    SyntheticRecord rec;
    rec.id = image_id(index);

    PlateRecord& plate = rec.plate;
    plate.shape = cfg.shapes[std::uniform_int_distribution<std::size_t>(0, cfg.shapes.size() - 1)(rng)];
    double rel_h = 1, rel_w = 1;
    plate_proportions(plate.shape, rel_h, rel_w);
    const double scale = Uniform(0.30, 0.42)(rng) * side / std::max(rel_h, rel_w);
    plate.half_height = rel_h * scale;
    plate.half_width = rel_w * scale;
    plate.angle = Uniform(-0.35, 0.35)(rng);
    plate.center_y = h / 2.0 + Uniform(-0.08, 0.08)(rng) * h;
    plate.center_x = w / 2.0 + Uniform(-0.08, 0.08)(rng) * w;
    plate.intensity = Uniform(0.28, 0.40)(rng);
    const double background = Uniform(0.04, 0.12)(rng);
    const double grad_y = Uniform(-0.03, 0.03)(rng);
    const double grad_x = Uniform(-0.03, 0.03)(rng);
    const double noise_sigma = 0.01;

    if (anomalous[static_cast<std::size_t>(index)]) {
      const int k = cfg.hotspots_per_anomalous[std::uniform_int_distribution<std::size_t>(
          0, cfg.hotspots_per_anomalous.size() - 1)(rng)];
      for (int b = 0; b < k; ++b) {
        BlobRecord blob;
        blob.amplitude = Uniform(0.35, 0.55)(rng);
        blob.sigma = Uniform(0.035, 0.06)(rng) * side;
        bool placed = false;
        for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
          blob.center_y = plate.center_y + Uniform(-1.0, 1.0)(rng) * plate.half_height;
          blob.center_x = plate.center_x + Uniform(-1.0, 1.0)(rng) * plate.half_width;
          placed = disk_inside_plate(plate, blob, h, w);
          if (!placed && attempt % 100 == 99) blob.sigma *= 0.8;
        }
        if (!placed) throw Error("could not place a hotspot inside plate of " + rec.id);
        rec.blobs.push_back(blob);
      }
    }

    ThermalImage img;
    img.id = rec.id;
    img.pixels = Image(h, w, 3);
    img.label = rec.blobs.empty() ? Label::kNormal : Label::kAnomalous;
    img.mask = Mask(h, w);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double v = background;
        if (plate_contains(plate, y, x)) {
          v = plate.intensity + grad_y * (y - plate.center_y) / plate.half_height +
              grad_x * (x - plate.center_x) / plate.half_width;
          for (const auto& blob : rec.blobs) {
            const double dy = y - blob.center_y, dx = x - blob.center_x;
            v += blob.amplitude * std::exp(-(dy * dy + dx * dx) / (2.0 * blob.sigma * blob.sigma));
            if (blob_covers(blob, y, x)) img.mask->at(y, x) = 1;
          }
        }
        v += noise(rng);
        const float f = static_cast<float>(std::clamp(v, 0.0, 1.0));
        img.pixels.at(y, x, 0) = img.pixels.at(y, x, 1) = img.pixels.at(y, x, 2) = f;
      }
    }
    ds.images.push_back(std::move(img));
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

nlohmann::json to_json(const SyntheticConfig& cfg) {
  nlohmann::json shapes = nlohmann::json::array();
  for (auto s : cfg.shapes) shapes.push_back(to_string(s));
  return {{"n_images", cfg.n_images},
          {"shapes", shapes},
          {"hotspots_per_anomalous", cfg.hotspots_per_anomalous},
          {"anomalous_fraction", cfg.anomalous_fraction},
          {"image_height", cfg.height},
          {"image_width", cfg.width},
          {"seed", cfg.seed}};
}

SyntheticConfig synthetic_config_from_json(const nlohmann::json& j) {
  SyntheticConfig cfg;
  cfg.n_images = j.at("n_images").get<int>();
  cfg.shapes.clear();
  for (const auto& s : j.at("shapes")) cfg.shapes.push_back(parse_plate_shape(s.get<std::string>()));
  cfg.hotspots_per_anomalous = j.at("hotspots_per_anomalous").get<std::vector<int>>();
  cfg.anomalous_fraction = j.at("anomalous_fraction").get<double>();
  cfg.height = j.at("image_height").get<int>();
  cfg.width = j.at("image_width").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

nlohmann::json to_json(const SyntheticDataset& ds) {
  nlohmann::json images = nlohmann::json::array();
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& rec = ds.records[i];
    nlohmann::json blobs = nlohmann::json::array();
    for (const auto& b : rec.blobs) {
      blobs.push_back({{"center_y", b.center_y}, {"center_x", b.center_x},
                       {"sigma", b.sigma}, {"amplitude", b.amplitude}});
    }
    images.push_back({{"id", rec.id},
                      {"label", to_int(*ds.images[i].label)},
                      {"plate",
                       {{"shape", to_string(rec.plate.shape)},
                        {"center_y", rec.plate.center_y},
                        {"center_x", rec.plate.center_x},
                        {"half_height", rec.plate.half_height},
                        {"half_width", rec.plate.half_width},
                        {"angle", rec.plate.angle},
                        {"intensity", rec.plate.intensity}}},
                      {"blobs", blobs}});
  }
  return {{"config", to_json(ds.config)}, {"images", images}};
}

}  // namespace hotspot::data
