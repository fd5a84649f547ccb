#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hotspot {

// Row-major raster with interleaved channels. Values are nominally in [0,1].
struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(int h, int w, int c, float fill = 0.0f);

  [[nodiscard]] bool empty() const { return pixels.empty(); }
  [[nodiscard]] std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  float& at(int y, int x, int c) { return pixels[index(y, x, c)]; }
  [[nodiscard]] float at(int y, int x, int c) const { return pixels[index(y, x, c)]; }

  bool operator==(const Image&) const = default;
};

// Binary H×W mask stored as 0/1 bytes.
struct Mask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int h, int w, std::uint8_t fill = 0);

  std::uint8_t& at(int y, int x) { return bits[static_cast<std::size_t>(y) * width + x]; }
  [[nodiscard]] std::uint8_t at(int y, int x) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  [[nodiscard]] std::size_t count() const;
  [[nodiscard]] bool any() const { return count() > 0; }

  bool operator==(const Mask&) const = default;
};

// Bilinear resize with half-pixel centers and clamped borders. Same-size
// resize returns the input unchanged.
Image resize_bilinear(const Image& src, int out_height, int out_width);

// ITU-R BT.601 luma; single-channel images pass through.
std::vector<float> luminance(const Image& img);

// Replicates a single channel into three.
Image gray_to_rgb(const Image& gray);

void clamp_unit(Image& img);

}  // namespace hotspot
