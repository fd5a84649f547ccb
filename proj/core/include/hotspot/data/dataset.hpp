#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotspot/data/thermal_image.hpp"

namespace hotspot::data {

// One `path,label` row of manifest.csv. Paths are relative to the dataset root
// unless absolute.
struct ManifestRow {
  std::string path;
  std::optional<Label> label;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest);
void write_manifest(const std::filesystem::path& manifest, std::span<const ManifestRow> rows);

// Loads every manifest row in order. A mask is attached when
// `<root>/masks/<stem>.png` exists. The image id is the file stem.
std::vector<ThermalImage> load_dataset(const std::filesystem::path& root,
                                       const std::filesystem::path& manifest);

// Writes `images/<id>.png`, `masks/<id>.png` (when present) and manifest.csv.
// Images whose three channels agree are stored as 8-bit gray.
void write_dataset(const std::filesystem::path& root, std::span<const ThermalImage> images);

}  // namespace hotspot::data
