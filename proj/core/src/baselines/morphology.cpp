#include "hotspot/baselines/morphology.hpp"

#include <utility>
#include <vector>

#include "hotspot/common/error.hpp"

namespace hotspot::baselines {

namespace {

std::vector<std::pair<int, int>> disk(int r) {
  std::vector<std::pair<int, int>> out;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dy * dy + dx * dx <= r * r) out.emplace_back(dy, dx);
    }
  }
  return out;
}

void check(int radius) {
  if (radius < 0) throw ValidationError("structuring element radius must be non-negative");
}

}  // namespace

Mask erode(const Mask& mask, int radius) {
  check(radius);
  if (radius == 0) return mask;
  const auto se = disk(radius);
  Mask out(mask.height, mask.width);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(y, x)) continue;
      bool keep = true;
      for (auto [dy, dx] : se) {
        const int ny = y + dy, nx = x + dx;
        if (ny < 0 || ny >= mask.height || nx < 0 || nx >= mask.width || !mask.at(ny, nx)) {
          keep = false;
          break;
        }
      }
      out.at(y, x) = keep ? 1 : 0;
    }
  }
  return out;
}

Mask dilate(const Mask& mask, int radius) {
  check(radius);
  if (radius == 0) return mask;
  const auto se = disk(radius);
  Mask out(mask.height, mask.width);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(y, x)) continue;
      for (auto [dy, dx] : se) {
        const int ny = y + dy, nx = x + dx;
        if (ny >= 0 && ny < mask.height && nx >= 0 && nx < mask.width) out.at(ny, nx) = 1;
      }
    }
  }
  return out;
}

Mask open(const Mask& mask, int radius) { return dilate(erode(mask, radius), radius); }

}  // namespace hotspot::baselines
