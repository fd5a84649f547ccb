#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hotspot/common/image.hpp"

namespace hotspot::baselines {

using Histogram = std::array<std::uint64_t, 256>;

// 8-bit luminance levels, round-half-up.
std::vector<std::uint8_t> gray_levels(const Image& img);
Histogram histogram(std::span<const std::uint8_t> levels);

// Thresholds t1 < … < tn split the bins into classes [0,t1), [t1,t2), …,
// [tn,256), each holding at least one pixel.
struct OtsuResult {
  std::vector<int> thresholds;
  double between_class_variance = 0;
};

// Σ w_k (μ_k − μ)² for the given thresholds (population weights).
double between_class_variance(const Histogram& hist, std::span<const int> thresholds);

// Maximizes between-class variance by dynamic programming over cumulative
// moments. Values within 1e-12 relative count as equal and the
// lexicographically smallest threshold tuple is returned. Throws
// SegmentationFailure if fewer than n+1 bins are occupied.
OtsuResult multilevel_otsu(const Histogram& hist, int n_thresholds);

}  // namespace hotspot::baselines
