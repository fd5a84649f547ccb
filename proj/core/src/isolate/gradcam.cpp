#include "hotspot/isolate/gradcam.hpp"

#include <algorithm>
#include <cmath>

#include "hotspot/common/error.hpp"
#include "hotspot/ssl/model.hpp"

namespace hotspot::isolate {

std::vector<double> weighted_activation_map(const nn::Tensor& features, const nn::Tensor& grads) {
  if (features.rank() != 4 || features.dim(0) != 1 || features.shape() != grads.shape()) {
    throw ValidationError("feature map and gradient must both be 1×C×h×w");
  }
  const int c = features.dim(1), h = features.dim(2), w = features.dim(3);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  std::vector<double> map(plane, 0.0);
  for (int ch = 0; ch < c; ++ch) {
    const double* g = grads.data() + ch * plane;
    const double* a = features.data() + ch * plane;
    double alpha = 0;
    for (std::size_t i = 0; i < plane; ++i) alpha += g[i];
    alpha /= static_cast<double>(plane);
    for (std::size_t i = 0; i < plane; ++i) map[i] += alpha * a[i];
  }
  for (double& v : map) v = std::max(0.0, v / c);
  return map;
}

Heatmap finalize_heatmap(const std::vector<double>& map, int h, int w, int out_height,
                         int out_width) {
  if (map.size() != static_cast<std::size_t>(h) * w) throw ValidationError("map size mismatch");
  Heatmap hm;
  hm.height = out_height;
  hm.width = out_width;
  hm.values.resize(static_cast<std::size_t>(out_height) * out_width);
  const double sy = static_cast<double>(h) / out_height;
  const double sx = static_cast<double>(w) / out_width;
  for (int y = 0; y < out_height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, h - 1.0);
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double ty = fy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, w - 1.0);
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double tx = fx - x0;
      auto m = [&](int yy, int xx) { return map[static_cast<std::size_t>(yy) * w + xx]; };
      hm.values[static_cast<std::size_t>(y) * out_width + x] =
          (1 - ty) * ((1 - tx) * m(y0, x0) + tx * m(y0, x1)) +
          ty * ((1 - tx) * m(y1, x0) + tx * m(y1, x1));
    }
  }
  const double peak = *std::max_element(hm.values.begin(), hm.values.end());
  if (peak > 0) {
    for (double& v : hm.values) v /= peak;
  }
  return hm;
}

Heatmap gradcam_heatmap(detect::Classifier& clf, const Image& img, int class_index,
                        const std::string& id) {
  if (class_index != 0 && class_index != 1) {
    throw ValidationError("class_index must be 0 or 1, got " + std::to_string(class_index));
  }
  const int size = clf.input_size();
  const Image resized = resize_bilinear(img, size, size);
  const nn::Tensor x = ssl::images_to_batch({&resized, 1}, size);
  const nn::Tensor features = clf.backbone().forward(x, nn::Context::infer());
  const nn::Tensor logits = clf.head().forward(features, nn::Context::trace());
  nn::Tensor seed(logits.shape());
  seed.at(0, class_index) = 1.0;
  const nn::Tensor grads = clf.head().backward(seed);
  clf.head().clear_trace();

  Heatmap hm = finalize_heatmap(weighted_activation_map(features, grads), features.dim(2),
                                features.dim(3), img.height, img.width);
  hm.source_image_id = id;
  hm.class_index = class_index;
  return hm;
}

}  // namespace hotspot::isolate
