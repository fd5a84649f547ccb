#include "hotspot/common/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "hotspot/common/error.hpp"

namespace hotspot {

ByteImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG '" + path.string() + "': " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  ByteImage out;
  out.height = static_cast<int>(image.height);
  out.width = static_cast<int>(image.width);
  out.channels = color ? 3 : 1;
  out.bytes.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, out.bytes.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG '" + path.string() + "': " + msg);
  }
  return out;
}

void write_png(const std::filesystem::path& path, const ByteImage& img) {
  if (img.channels != 1 && img.channels != 3) {
    throw ValidationError("PNG writer supports 1 or 3 channels");
  }
  if (img.bytes.size() != static_cast<std::size_t>(img.height) * img.width * img.channels) {
    throw ValidationError("PNG buffer size does not match dimensions");
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.bytes.data(), 0, nullptr)) {
    throw IoError("cannot write PNG '" + path.string() + "': " + image.message);
  }
}

ByteImage to_bytes(const Image& img) {
  ByteImage out{img.height, img.width, img.channels, {}};
  out.bytes.resize(img.pixels.size());
  std::transform(img.pixels.begin(), img.pixels.end(), out.bytes.begin(), [](float v) {
    return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0f, 1.0f) * 255.0f + 0.5f));
  });
  return out;
}

Image from_bytes(const ByteImage& img) {
  Image out(img.height, img.width, img.channels);
  std::transform(img.bytes.begin(), img.bytes.end(), out.pixels.begin(),
                 [](std::uint8_t b) { return static_cast<float>(b) / 255.0f; });
  return out;
}

ByteImage mask_to_bytes(const Mask& mask) {
  ByteImage out{mask.height, mask.width, 1, {}};
  out.bytes.resize(mask.bits.size());
  std::transform(mask.bits.begin(), mask.bits.end(), out.bytes.begin(),
                 [](std::uint8_t b) -> std::uint8_t { return b ? 255 : 0; });
  return out;
}

Mask mask_from_bytes(const ByteImage& img) {
  Mask out(img.height, img.width);
  for (std::size_t i = 0; i < out.bits.size(); ++i) {
    bool set = false;
    for (int c = 0; c < img.channels; ++c) set |= img.bytes[i * img.channels + c] != 0;
    out.bits[i] = set ? 1 : 0;
  }
  return out;
}

Image load_rgb(const std::filesystem::path& path) {
  Image img = from_bytes(read_png(path));
  return img.channels == 1 ? gray_to_rgb(img) : img;
}

}  // namespace hotspot
