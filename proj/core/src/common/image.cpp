#include "hotspot/common/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hotspot/common/error.hpp"

namespace hotspot {

Image::Image(int h, int w, int c, float fill)
    : height(h), width(w), channels(c),
      pixels(static_cast<std::size_t>(h) * w * c, fill) {
  if (h < 0 || w < 0 || c < 0) throw ValidationError("negative image dimensions");
}

Mask::Mask(int h, int w, std::uint8_t fill)
    : height(h), width(w), bits(static_cast<std::size_t>(h) * w, fill) {
  if (h < 0 || w < 0) throw ValidationError("negative mask dimensions");
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(
      std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

Image resize_bilinear(const Image& src, int out_height, int out_width) {
  if (out_height <= 0 || out_width <= 0) throw ValidationError("resize target must be positive");
  if (src.empty()) throw ValidationError("cannot resize an empty image");
  if (src.height == out_height && src.width == out_width) return src;

  Image dst(out_height, out_width, src.channels);
  const double sy = static_cast<double>(src.height) / out_height;
  const double sx = static_cast<double>(src.width) / out_width;

  std::vector<int> x0(out_width), x1(out_width);
  std::vector<float> fx(out_width);
  for (int x = 0; x < out_width; ++x) {
    double s = std::clamp((x + 0.5) * sx - 0.5, 0.0, src.width - 1.0);
    x0[x] = static_cast<int>(std::floor(s));
    x1[x] = std::min(x0[x] + 1, src.width - 1);
    fx[x] = static_cast<float>(s - x0[x]);
  }
  for (int y = 0; y < out_height; ++y) {
    double s = std::clamp((y + 0.5) * sy - 0.5, 0.0, src.height - 1.0);
    const int y0 = static_cast<int>(std::floor(s));
    const int y1 = std::min(y0 + 1, src.height - 1);
    const float fy = static_cast<float>(s - y0);
    for (int x = 0; x < out_width; ++x) {
      for (int c = 0; c < src.channels; ++c) {
        const float top = src.at(y0, x0[x], c) * (1 - fx[x]) + src.at(y0, x1[x], c) * fx[x];
        const float bot = src.at(y1, x0[x], c) * (1 - fx[x]) + src.at(y1, x1[x], c) * fx[x];
        dst.at(y, x, c) = top * (1 - fy) + bot * fy;
      }
    }
  }
  return dst;
}

std::vector<float> luminance(const Image& img) {
  const std::size_t n = static_cast<std::size_t>(img.height) * img.width;
  std::vector<float> out(n);
  if (img.channels == 1) {
    std::copy(img.pixels.begin(), img.pixels.end(), out.begin());
    return out;
  }
  if (img.channels < 3) throw ValidationError("luminance needs 1 or 3+ channels");
  for (std::size_t i = 0; i < n; ++i) {
    const float* p = &img.pixels[i * img.channels];
    // Equal channels short-circuit so gray inputs stay bit-exact.
    if (p[0] == p[1] && p[1] == p[2]) {
      out[i] = p[0];
    } else {
      out[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
    }
  }
  return out;
}

Image gray_to_rgb(const Image& gray) {
  if (gray.channels != 1) throw ValidationError("gray_to_rgb expects one channel");
  Image out(gray.height, gray.width, 3);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    out.pixels[3 * i] = out.pixels[3 * i + 1] = out.pixels[3 * i + 2] = gray.pixels[i];
  }
  return out;
}

void clamp_unit(Image& img) {
  for (float& v : img.pixels) v = std::clamp(v, 0.0f, 1.0f);
}

}  // namespace hotspot
