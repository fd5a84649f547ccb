#pragma once

#include <string>
#include <vector>

#include "hotspot/common/image.hpp"
#include "hotspot/detect/classifier.hpp"
#include "hotspot/nn/tensor.hpp"

namespace hotspot::isolate {

struct Heatmap {
  int height = 0;
  int width = 0;
  std::vector<double> values;  // row-major, in [0,1]
  std::string source_image_id;
  int class_index = 1;

  [[nodiscard]] double at(int y, int x) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

// Channel-weighted feature map from final-conv activations and the gradient
// of the class score with respect to them (both 1×C×h×w): per-channel mean
// gradient times activation, averaged over channels, negatives set to zero.
// Returns h×w row-major values (unnormalized).
std::vector<double> weighted_activation_map(const nn::Tensor& features, const nn::Tensor& grads);

// Bilinear upsample (half-pixel centers, clamped) of an h×w map to H×W, then
// division by the maximum. A map that is zero everywhere stays zero.
Heatmap finalize_heatmap(const std::vector<double>& map, int h, int w, int out_height,
                         int out_width);

// Gradient of the pre-softmax score of `class_index` with respect to the last
// backbone feature map, computed with inference-mode statistics.
Heatmap gradcam_heatmap(detect::Classifier& clf, const Image& img, int class_index = 1,
                        const std::string& id = "");

}  // namespace hotspot::isolate
