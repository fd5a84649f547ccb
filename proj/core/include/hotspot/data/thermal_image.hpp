#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hotspot/common/image.hpp"

namespace hotspot::data {

enum class Label : std::uint8_t { kNormal = 0, kAnomalous = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }

// One raster of the dataset. Pixels are H×W×3 in [0,1].
struct ThermalImage {
  std::string id;
  Image pixels;
  std::optional<Label> label;
  std::optional<Mask> mask;
};

// Throws ValidationError when a ThermalImage invariant does not hold:
// three channels, unit-interval pixels, mask dims match, normal ⇒ empty mask.
void validate(const ThermalImage& img);

}  // namespace hotspot::data
