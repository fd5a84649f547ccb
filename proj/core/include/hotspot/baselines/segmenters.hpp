#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "hotspot/baselines/color.hpp"
#include "hotspot/common/image.hpp"

namespace hotspot::baselines {

enum class Method { kKmeansLab, kKmeansPv, kHsvThreshold, kMultilevelOtsu };

std::string to_string(Method m);
// Accepts the canonical names and the short forms "hsv" and "otsu".
Method parse_method(const std::string& name);

struct SegmentationResult {
  Mask mask;
  Method method = Method::kKmeansLab;
  nlohmann::json params;
};

// k-means over per-pixel L*a*b*; the cluster with the highest mean L* is the
// hotspot.
SegmentationResult kmeans_lab_segment(const Image& img, int k = 2, std::uint64_t seed = 0);

struct BBox {
  int y = 0, x = 0, height = 0, width = 0;
};

// k = 3 on luminance inside the box, brightest cluster kept. A crop with only
// two distinct levels is clustered with k = 2.
SegmentationResult kmeans_pv_segment(const Image& img, const BBox& box, std::uint64_t seed = 0);

// Hue in degrees; lower.h > upper.h selects the wrapped interval through 0.
SegmentationResult hsv_threshold_segment(const Image& img, const Hsv& lower, const Hsv& upper);

// Binarize at the largest multilevel Otsu threshold, then open with a disk.
SegmentationResult multilevel_otsu_segment(const Image& img, int n_thresholds = 4,
                                           int opening_radius = 1);

}  // namespace hotspot::baselines
