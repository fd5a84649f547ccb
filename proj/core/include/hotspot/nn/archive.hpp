#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hotspot/nn/layers.hpp"

namespace hotspot::nn {

inline constexpr std::uint32_t kArchiveFormatVersion = 1;

// Single-file container: magic "HSPA", u32 format version, u64 header length,
// a JSON header (metadata + tensor index), then raw little-endian float64 data.
struct Archive {
  struct Entry {
    std::string name;
    Tensor tensor;
  };

  nlohmann::json metadata = nlohmann::json::object();
  std::vector<Entry> tensors;

  [[nodiscard]] const Entry* find(const std::string& name) const;
};

void write_archive(const std::filesystem::path& path, const Archive& archive);
Archive read_archive(const std::filesystem::path& path);

// Copies every parameter of `layer` into the archive under `prefix`.
void store_parameters(Archive& archive, const std::string& prefix, Layer& layer);

// Fills every parameter of `layer` from the archive; a missing name or a shape
// mismatch throws ValidationError.
void load_parameters(const Archive& archive, const std::string& prefix, Layer& layer);

}  // namespace hotspot::nn
