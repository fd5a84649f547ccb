#pragma once

#include "hotspot/common/image.hpp"

namespace hotspot::baselines {

// Disk structuring element of the given radius; pixels outside the image
// count as background. Radius 0 is the identity.
Mask erode(const Mask& mask, int radius);
Mask dilate(const Mask& mask, int radius);
Mask open(const Mask& mask, int radius);

}  // namespace hotspot::baselines
