#include "hotspot/isolate/overlay.hpp"

#include <algorithm>
#include <cmath>

#include "hotspot/common/error.hpp"

namespace hotspot::isolate {

namespace {

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

}  // namespace

std::array<std::uint8_t, 3> colormap(double v) {
  v = std::clamp(v, 0.0, 1.0);
  double r, g, b;
  if (v < 1.0 / 3.0) {
    const double t = v * 3.0;
    r = 0.0, g = t, b = 1.0;
  } else if (v < 2.0 / 3.0) {
    const double t = (v - 1.0 / 3.0) * 3.0;
    r = t, g = 1.0, b = 1.0 - t;
  } else {
    const double t = (v - 2.0 / 3.0) * 3.0;
    r = 1.0, g = 1.0 - t, b = 0.0;
  }
  return {quantize(r), quantize(g), quantize(b)};
}

ByteImage heatmap_to_bytes(const Heatmap& heatmap) {
  ByteImage out{heatmap.height, heatmap.width, 1, {}};
  out.bytes.reserve(heatmap.values.size());
  for (double v : heatmap.values) out.bytes.push_back(quantize(v));
  return out;
}

ByteImage render_overlay(const Image& img, const Heatmap& heatmap, const HotspotRegion& region) {
  if (img.channels != 3 || heatmap.height != img.height || heatmap.width != img.width ||
      region.mask.height != img.height || region.mask.width != img.width) {
    throw ValidationError("overlay inputs must share the image dimensions");
  }
  const int h = img.height, w = img.width;
  ByteImage out{h, 3 * w, 3, std::vector<std::uint8_t>(static_cast<std::size_t>(h) * 3 * w * 3)};
  auto put = [&](int y, int x, std::array<std::uint8_t, 3> rgb) {
    const std::size_t o = (static_cast<std::size_t>(y) * 3 * w + x) * 3;
    out.bytes[o] = rgb[0];
    out.bytes[o + 1] = rgb[1];
    out.bytes[o + 2] = rgb[2];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::array<std::uint8_t, 3> px{quantize(img.at(y, x, 0)), quantize(img.at(y, x, 1)),
                                           quantize(img.at(y, x, 2))};
      put(y, x, px);
      put(y, w + x, colormap(heatmap.at(y, x)));
      if (region.mask.at(y, x)) {
        put(y, 2 * w + x,
            {static_cast<std::uint8_t>((px[0] + 255 + 1) / 2), static_cast<std::uint8_t>(px[1] / 2),
             static_cast<std::uint8_t>(px[2] / 2)});
      } else {
        put(y, 2 * w + x, px);
      }
    }
  }
  return out;
}

void write_overlay(const std::filesystem::path& path, const Image& img, const Heatmap& heatmap,
                   const HotspotRegion& region) {
  write_png(path, render_overlay(img, heatmap, region));
}

}  // namespace hotspot::isolate
