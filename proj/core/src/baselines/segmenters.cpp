#include "hotspot/baselines/segmenters.hpp"

#include <algorithm>

#include "hotspot/baselines/kmeans.hpp"
#include "hotspot/baselines/morphology.hpp"
#include "hotspot/baselines/otsu.hpp"
#include "hotspot/common/error.hpp"

namespace hotspot::baselines {

std::string to_string(Method m) {
  switch (m) {
    case Method::kKmeansLab: return "kmeans_lab";
    case Method::kKmeansPv: return "kmeans_pv";
    case Method::kHsvThreshold: return "hsv_threshold";
    case Method::kMultilevelOtsu: return "multilevel_otsu";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "kmeans_lab") return Method::kKmeansLab;
  if (name == "kmeans_pv") return Method::kKmeansPv;
  if (name == "hsv" || name == "hsv_threshold") return Method::kHsvThreshold;
  if (name == "otsu" || name == "multilevel_otsu") return Method::kMultilevelOtsu;
  throw ValidationError("unknown segmentation method '" + name + "'");
}

namespace {

void require_rgb(const Image& img) {
  if (img.channels != 3 || img.empty()) throw ValidationError("segmenters expect an RGB image");
}

// Index of the cluster whose mean of column `col` is largest (ties: lowest index).
int brightest(const KMeansResult& r, Eigen::Index col) {
  int best = 0;
  for (Eigen::Index c = 1; c < r.centroids.rows(); ++c) {
    if (r.centroids(c, col) > r.centroids(best, col)) best = static_cast<int>(c);
  }
  return best;
}

}  // namespace

SegmentationResult kmeans_lab_segment(const Image& img, int k, std::uint64_t seed) {
  require_rgb(img);
  const Eigen::Index n = static_cast<Eigen::Index>(img.height) * img.width;
  nn::RowMatrix points(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const float* px = img.pixels.data() + i * 3;
    const Lab lab = rgb_to_lab(px[0], px[1], px[2]);
    points(i, 0) = lab.l;
    points(i, 1) = lab.a;
    points(i, 2) = lab.b;
  }
  KMeansOptions opt;
  opt.seed = seed;
  const KMeansResult r = kmeans(points, k, opt);
  const int hot = brightest(r, 0);
  SegmentationResult out;
  out.method = Method::kKmeansLab;
  out.params = {{"k", k}, {"seed", seed}};
  out.mask = Mask(img.height, img.width);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.mask.bits[static_cast<std::size_t>(i)] = r.assignment[static_cast<std::size_t>(i)] == hot;
  }
  return out;
}

SegmentationResult kmeans_pv_segment(const Image& img, const BBox& box, std::uint64_t seed) {
  require_rgb(img);
  if (box.height <= 0 || box.width <= 0) throw ValidationError("bounding box is empty");
  if (box.y < 0 || box.x < 0 || box.y + box.height > img.height || box.x + box.width > img.width) {
    throw ValidationError("bounding box exceeds the image bounds");
  }
  const std::vector<float> lum = luminance(img);
  nn::RowMatrix points(static_cast<Eigen::Index>(box.height) * box.width, 1);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) {
      points(static_cast<Eigen::Index>(y) * box.width + x, 0) =
          lum[static_cast<std::size_t>(box.y + y) * img.width + box.x + x];
    }
  }
  const auto distinct = count_distinct_rows(points, 3);
  if (distinct < 2) throw ValidationError("bounding box holds a single intensity level");
  const int k = static_cast<int>(std::min<std::size_t>(3, distinct));
  KMeansOptions opt;
  opt.seed = seed;
  const KMeansResult r = kmeans(points, k, opt);
  const int hot = brightest(r, 0);
  SegmentationResult out;
  out.method = Method::kKmeansPv;
  out.params = {{"k", k},
                {"seed", seed},
                {"bbox", {{"y", box.y}, {"x", box.x}, {"height", box.height}, {"width", box.width}}}};
  out.mask = Mask(img.height, img.width);
  for (int y = 0; y < box.height; ++y) {
    for (int x = 0; x < box.width; ++x) {
      out.mask.at(box.y + y, box.x + x) =
          r.assignment[static_cast<std::size_t>(y) * box.width + x] == hot;
    }
  }
  return out;
}

SegmentationResult hsv_threshold_segment(const Image& img, const Hsv& lower, const Hsv& upper) {
  require_rgb(img);
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!(lower.h >= 0 && lower.h <= 360 && upper.h >= 0 && upper.h <= 360)) {
    throw ValidationError("hue bounds must lie in [0,360]");
  }
  if (!in_unit(lower.s) || !in_unit(upper.s) || !in_unit(lower.v) || !in_unit(upper.v)) {
    throw ValidationError("saturation and value bounds must lie in [0,1]");
  }
  if (lower.s > upper.s || lower.v > upper.v) {
    throw ValidationError("saturation/value lower bound exceeds the upper bound");
  }
  const bool wrap = lower.h > upper.h;
  SegmentationResult out;
  out.method = Method::kHsvThreshold;
  out.params = {{"lower", {lower.h, lower.s, lower.v}}, {"upper", {upper.h, upper.s, upper.v}}};
  out.mask = Mask(img.height, img.width);
  for (std::size_t i = 0; i < out.mask.bits.size(); ++i) {
    const float* px = img.pixels.data() + i * 3;
    const Hsv c = rgb_to_hsv(px[0], px[1], px[2]);
    const bool h_ok = wrap ? (c.h >= lower.h || c.h <= upper.h) : (c.h >= lower.h && c.h <= upper.h);
    const bool s_ok = c.s >= lower.s && c.s <= upper.s;
    const bool v_ok = c.v >= lower.v && c.v <= upper.v;
    out.mask.bits[i] = h_ok && s_ok && v_ok;
  }
  return out;
}

SegmentationResult multilevel_otsu_segment(const Image& img, int n_thresholds,
                                           int opening_radius) {
  require_rgb(img);
  const auto levels = gray_levels(img);
  const OtsuResult r = multilevel_otsu(histogram(levels), n_thresholds);
  const int t = r.thresholds.back();
  Mask raw(img.height, img.width);
  for (std::size_t i = 0; i < levels.size(); ++i) raw.bits[i] = levels[i] >= t;
  SegmentationResult out;
  out.method = Method::kMultilevelOtsu;
  out.params = {{"n_thresholds", n_thresholds},
                {"opening_radius", opening_radius},
                {"thresholds", r.thresholds}};
  out.mask = open(raw, opening_radius);
  return out;
}

}  // namespace hotspot::baselines
