#include "hotspot/data/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hotspot/common/error.hpp"

namespace hotspot::data {

namespace {

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi)) {
    throw ValidationError(std::string("augment policy: ") + name + " out of range");
  }
}

float sample_replicate(const Image& img, double y, double x, int c) {
  y = std::clamp(y, 0.0, img.height - 1.0);
  x = std::clamp(x, 0.0, img.width - 1.0);
  const int y0 = static_cast<int>(std::floor(y));
  const int x0 = static_cast<int>(std::floor(x));
  const int y1 = std::min(y0 + 1, img.height - 1);
  const int x1 = std::min(x0 + 1, img.width - 1);
  const float fy = static_cast<float>(y - y0);
  const float fx = static_cast<float>(x - x0);
  const float top = img.at(y0, x0, c) * (1 - fx) + img.at(y0, x1, c) * fx;
  const float bot = img.at(y1, x0, c) * (1 - fx) + img.at(y1, x1, c) * fx;
  return top * (1 - fy) + bot * fy;
}

}  // namespace

AugmentPolicy::AugmentPolicy(const AugmentParams& p) : params_(p) {
  check_range(p.translate_max_frac, 0.0, 0.3, "translate_max_frac");
  check_range(p.flip_prob, 0.0, 1.0, "flip_prob");
  check_range(p.drop_color_prob, 0.0, 1.0, "drop_color_prob");
  if (!(p.blur_sigma_lo >= 0.0 && p.blur_sigma_hi >= p.blur_sigma_lo)) {
    throw ValidationError("augment policy: blur sigma range must satisfy 0 <= lo <= hi");
  }
  if (!(p.jitter_strength >= 0.0 && p.jitter_strength < 1.0)) {
    throw ValidationError("augment policy: jitter_strength must lie in [0,1)");
  }
  if (!(p.rotate_max_deg >= 0.0 && p.rotate_max_deg <= 180.0)) {
    throw ValidationError("augment policy: rotate_max_deg must lie in [0,180]");
  }
}

AugmentPolicy AugmentPolicy::identity() {
  return AugmentPolicy(AugmentParams{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0});
}

AugmentPolicy AugmentPolicy::flip_only() {
  return AugmentPolicy(AugmentParams{0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0});
}

Image translate_replicate(const Image& img, int dy, int dx) {
  if (dy == 0 && dx == 0) return img;
  Image out(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y) {
    const int sy = std::clamp(y - dy, 0, img.height - 1);
    for (int x = 0; x < img.width; ++x) {
      const int sx = std::clamp(x - dx, 0, img.width - 1);
      for (int c = 0; c < img.channels; ++c) out.at(y, x, c) = img.at(sy, sx, c);
    }
  }
  return out;
}

Image flip_horizontal(const Image& img) {
  Image out(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) out.at(y, x, c) = img.at(y, img.width - 1 - x, c);
    }
  }
  return out;
}

Image gaussian_blur(const Image& img, double sigma) {
  if (sigma <= 1e-3) return img;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<float> kernel(2 * radius + 1);
  double total = 0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    kernel[i + radius] = static_cast<float>(v);
    total += v;
  }
  for (float& k : kernel) k = static_cast<float>(k / total);

  Image tmp(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        float acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[i + radius] * img.at(y, std::clamp(x + i, 0, img.width - 1), c);
        }
        tmp.at(y, x, c) = acc;
      }
    }
  }
  Image out(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        float acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          acc += kernel[i + radius] * tmp.at(std::clamp(y + i, 0, img.height - 1), x, c);
        }
        out.at(y, x, c) = acc;
      }
    }
  }
  return out;
}

Image rotate_replicate(const Image& img, double degrees) {
  if (std::abs(degrees) < 1e-9) return img;
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double cy = (img.height - 1) / 2.0, cx = (img.width - 1) / 2.0;
  Image out(img.height, img.width, img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      // inverse map: rotate the destination coordinate back into the source
      const double dy = y - cy, dx = x - cx;
      const double sx = c * dx + s * dy + cx;
      const double sy = -s * dx + c * dy + cy;
      for (int ch = 0; ch < img.channels; ++ch) out.at(y, x, ch) = sample_replicate(img, sy, sx, ch);
    }
  }
  return out;
}

Image augment_resized(const Image& resized, const AugmentPolicy& policy, Rng& rng) {
  const AugmentParams& p = policy.params();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto symmetric = [&](double bound) { return (2.0 * unit(rng) - 1.0) * bound; };

  // All draws happen up front so the stream position never depends on the policy.
  const double ty = symmetric(p.translate_max_frac);
  const double tx = symmetric(p.translate_max_frac);
  const double flip_draw = unit(rng);
  const double blur_sigma = p.blur_sigma_lo + unit(rng) * (p.blur_sigma_hi - p.blur_sigma_lo);
  const double contrast = 1.0 + symmetric(p.jitter_strength);
  double gains[3];
  for (double& g : gains) g = 1.0 + symmetric(p.jitter_strength);
  const double drop_draw = unit(rng);
  const double angle = symmetric(p.rotate_max_deg);

  Image img = translate_replicate(resized, static_cast<int>(std::lround(ty * resized.height)),
                                  static_cast<int>(std::lround(tx * resized.width)));
  if (flip_draw < p.flip_prob) img = flip_horizontal(img);
  img = gaussian_blur(img, blur_sigma);

  if (p.jitter_strength > 0.0) {
    double mean = 0;
    for (float v : img.pixels) mean += v;
    mean /= static_cast<double>(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const double v = (img.pixels[i] - mean) * contrast + mean;
      img.pixels[i] = static_cast<float>(v * gains[i % 3]);
    }
    clamp_unit(img);
  }

  if (drop_draw < p.drop_color_prob) {
    const auto gray = luminance(img);
    for (std::size_t i = 0; i < gray.size(); ++i) {
      img.pixels[3 * i] = img.pixels[3 * i + 1] = img.pixels[3 * i + 2] = gray[i];
    }
  }

  img = rotate_replicate(img, angle);
  clamp_unit(img);
  return img;
}

Image augment_view(const ThermalImage& img, const AugmentPolicy& policy, Rng& rng) {
  validate(img);
  return augment_resized(resize_bilinear(img.pixels, kViewSize, kViewSize), policy, rng);
}

ViewPair make_view_pair(const ThermalImage& img, const AugmentPolicy& policy, Rng& rng) {
  validate(img);
  const Image resized = resize_bilinear(img.pixels, kViewSize, kViewSize);
  ViewPair pair;
  pair.v1 = augment_resized(resized, policy, rng);
  pair.v2 = augment_resized(resized, policy, rng);
  pair.source_id = img.id;
  return pair;
}

}  // namespace hotspot::data
