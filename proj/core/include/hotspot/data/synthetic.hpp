#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/data/thermal_image.hpp"

namespace hotspot::data {

enum class PlateShape { kRectangle, kTriangle, kOval, kRhombus };

std::string to_string(PlateShape shape);
PlateShape parse_plate_shape(const std::string& name);

struct SyntheticConfig {
  int n_images = 100;
  std::vector<PlateShape> shapes{PlateShape::kRectangle, PlateShape::kTriangle,
                                 PlateShape::kOval, PlateShape::kRhombus};
  std::vector<int> hotspots_per_anomalous{1, 2, 3};
  double anomalous_fraction = 0.5;
  int height = 240;
  int width = 320;
  std::uint64_t seed = 0;

  void validate() const;
};

// Plate geometry in pixel coordinates: center, half extents along the plate's
// own axes, and rotation (radians) of those axes.
struct PlateRecord {
  PlateShape shape = PlateShape::kRectangle;
  double center_y = 0, center_x = 0;
  double half_height = 0, half_width = 0;
  double angle = 0;
  double intensity = 0;
};

struct BlobRecord {
  double center_y = 0, center_x = 0;
  double sigma = 0;
  double amplitude = 0;
};

struct SyntheticRecord {
  std::string id;
  PlateRecord plate;
  std::vector<BlobRecord> blobs;
};

struct SyntheticDataset {
  SyntheticConfig config;
  std::vector<ThermalImage> images;
  std::vector<SyntheticRecord> records;  // parallel to images
};

// Renders n_images plates; anomalous ones get k Gaussian blobs fully inside the
// plate. Ground truth marks pixels where some blob reaches half its peak.
SyntheticDataset generate_synthetic_dataset(const SyntheticConfig& cfg);

bool plate_contains(const PlateRecord& plate, double y, double x);

// Half-peak membership: exp(-d²/2σ²) ≥ 1/2.
bool blob_covers(const BlobRecord& blob, double y, double x);

nlohmann::json to_json(const SyntheticConfig& cfg);
SyntheticConfig synthetic_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticDataset& ds);  // gen_config.json payload

}  // namespace hotspot::data
