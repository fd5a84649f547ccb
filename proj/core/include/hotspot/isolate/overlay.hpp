#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "hotspot/common/image.hpp"
#include "hotspot/common/png_io.hpp"
#include "hotspot/isolate/gradcam.hpp"
#include "hotspot/isolate/regions.hpp"

namespace hotspot::isolate {

// Blue→cyan→yellow→red ramp for v in [0,1].
std::array<std::uint8_t, 3> colormap(double v);

// 8-bit gray rendering of a heatmap.
ByteImage heatmap_to_bytes(const Heatmap& heatmap);

// Three panels side by side: the input, the colour-mapped heatmap, and the
// input with mask pixels tinted red. Output is RGB, 3·W wide.
ByteImage render_overlay(const Image& img, const Heatmap& heatmap, const HotspotRegion& region);

void write_overlay(const std::filesystem::path& path, const Image& img, const Heatmap& heatmap,
                   const HotspotRegion& region);

}  // namespace hotspot::isolate
