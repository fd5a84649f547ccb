#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "hotspot/common/image.hpp"
#include "hotspot/data/thermal_image.hpp"

namespace hotspot::data {

inline constexpr int kViewSize = 224;

using Rng = std::mt19937_64;

struct AugmentParams {
  double translate_max_frac = 0.1;  // of the side length, in [0, 0.3]
  double flip_prob = 0.5;
  double blur_sigma_lo = 0.0;       // pixels
  double blur_sigma_hi = 1.5;
  double jitter_strength = 0.2;     // contrast and per-channel gain in [1-s, 1+s]
  double drop_color_prob = 0.2;
  double rotate_max_deg = 15.0;
  std::uint64_t seed = 0;
};

// Validated augmentation bounds. Every magnitude at zero is the identity
// (apart from the resize to kViewSize).
class AugmentPolicy {
 public:
  AugmentPolicy() : AugmentPolicy(AugmentParams{}) {}
  explicit AugmentPolicy(const AugmentParams& params);

  static AugmentPolicy identity();
  static AugmentPolicy flip_only();

  [[nodiscard]] const AugmentParams& params() const { return params_; }

 private:
  AugmentParams params_;
};

struct ViewPair {
  Image v1;
  Image v2;
  std::string source_id;
};

// Resize to 224×224 then translate, flip, blur, jitter, drop colour, rotate.
// Consumes the same number of draws from `rng` whatever the policy.
Image augment_view(const ThermalImage& img, const AugmentPolicy& policy, Rng& rng);

// Same as above but starting from an already resized image; the output keeps
// its size.
Image augment_resized(const Image& resized, const AugmentPolicy& policy, Rng& rng);

ViewPair make_view_pair(const ThermalImage& img, const AugmentPolicy& policy, Rng& rng);

// Building blocks, exposed for tests.
Image translate_replicate(const Image& img, int dy, int dx);
Image flip_horizontal(const Image& img);
Image gaussian_blur(const Image& img, double sigma);
Image rotate_replicate(const Image& img, double degrees);

}  // namespace hotspot::data
