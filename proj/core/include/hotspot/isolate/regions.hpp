#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/common/image.hpp"
#include "hotspot/isolate/gradcam.hpp"

namespace hotspot::isolate {

struct Component {
  int min_y = 0, min_x = 0, max_y = 0, max_x = 0;  // inclusive box
  double centroid_y = 0, centroid_x = 0;
  int area = 0;
};

struct HotspotRegion {
  Mask mask;
  std::vector<Component> components;  // largest first
};

// 8-connected components of a mask; `labels` (optional) receives a 1-based
// component id per pixel, 0 for background, ids in scan order.
std::vector<Component> connected_components(const Mask& mask, std::vector<int>* labels = nullptr);

struct IsolationParams {
  double threshold = 0.5;
  int min_area = 20;
};

// mask = heatmap ≥ threshold, minus components smaller than min_area.
HotspotRegion isolate_hotspots(const Heatmap& heatmap, const IsolationParams& params = {});

nlohmann::json to_json(const HotspotRegion& region);

}  // namespace hotspot::isolate
