#include "hotspot/isolate/regions.hpp"

#include <algorithm>

#include "hotspot/common/error.hpp"

namespace hotspot::isolate {

std::vector<Component> connected_components(const Mask& mask, std::vector<int>* labels_out) {
  const int h = mask.height, w = mask.width;
  std::vector<int> labels(static_cast<std::size_t>(h) * w, 0);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      if (!mask.bits[i] || labels[i]) continue;
      const int id = static_cast<int>(comps.size()) + 1;
      Component c{y, x, y, x, 0.0, 0.0, 0};
      double sy = 0, sx = 0;
      labels[i] = id;
      stack.push_back({y, x});
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        ++c.area;
        sy += cy;
        sx += cx;
        c.min_y = std::min(c.min_y, cy);
        c.max_y = std::max(c.max_y, cy);
        c.min_x = std::min(c.min_x, cx);
        c.max_x = std::max(c.max_x, cx);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = cy + dy, nx = cx + dx;
            if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
            const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
            if (mask.bits[j] && !labels[j]) {
              labels[j] = id;
              stack.push_back({ny, nx});
            }
          }
        }
      }
      c.centroid_y = sy / c.area;
      c.centroid_x = sx / c.area;
      comps.push_back(c);
    }
  }
  if (labels_out) *labels_out = std::move(labels);
  return comps;
}

HotspotRegion isolate_hotspots(const Heatmap& heatmap, const IsolationParams& params) {
  if (!(params.threshold > 0.0 && params.threshold < 1.0)) {
    throw ValidationError("isolation threshold must lie in (0,1)");
  }
  if (params.min_area < 0) throw ValidationError("min_area must be non-negative");
  Mask raw(heatmap.height, heatmap.width);
  for (std::size_t i = 0; i < raw.bits.size(); ++i) {
    raw.bits[i] = heatmap.values[i] >= params.threshold ? 1 : 0;
  }
  std::vector<int> labels;
  const auto comps = connected_components(raw, &labels);

  HotspotRegion region;
  region.mask = Mask(heatmap.height, heatmap.width);
  std::vector<bool> keep(comps.size() + 1, false);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    if (comps[k].area >= params.min_area) {
      keep[k + 1] = true;
      region.components.push_back(comps[k]);
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    region.mask.bits[i] = keep[static_cast<std::size_t>(labels[i])] && labels[i] ? 1 : 0;
  }
  std::stable_sort(region.components.begin(), region.components.end(),
                   [](const Component& a, const Component& b) { return a.area > b.area; });
  return region;
}

nlohmann::json to_json(const HotspotRegion& region) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : region.components) {
    comps.push_back({{"bbox", {{"min_y", c.min_y}, {"min_x", c.min_x}, {"max_y", c.max_y},
                               {"max_x", c.max_x}}},
                     {"centroid", {{"y", c.centroid_y}, {"x", c.centroid_x}}},
                     {"area", c.area}});
  }
  return {{"height", region.mask.height},
          {"width", region.mask.width},
          {"mask_area", region.mask.count()},
          {"components", comps}};
}

}  // namespace hotspot::isolate
