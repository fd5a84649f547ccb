#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "hotspot/common/image.hpp"

namespace hotspot {

// 8-bit raster as stored on disk; channels is 1 (gray) or 3 (RGB).
struct ByteImage {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> bytes;

  bool operator==(const ByteImage&) const = default;
};

ByteImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ByteImage& img);

// Quantizes [0,1] floats to 0..255 with round-half-up after clamping.
ByteImage to_bytes(const Image& img);
Image from_bytes(const ByteImage& img);

// Masks travel as 0/255 gray PNGs; any nonzero byte reads back as set.
ByteImage mask_to_bytes(const Mask& mask);
Mask mask_from_bytes(const ByteImage& img);

// Loads an 8-bit gray or RGB PNG as a 3-channel unit-interval image.
Image load_rgb(const std::filesystem::path& path);

}  // namespace hotspot
