#include "hotspot/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hotspot/common/error.hpp"
#include "hotspot/common/png_io.hpp"

namespace hotspot::data {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool channels_equal(const Image& img) {
  for (std::size_t i = 0; i + 2 < img.pixels.size(); i += 3) {
    if (img.pixels[i] != img.pixels[i + 1] || img.pixels[i] != img.pixels[i + 2]) return false;
  }
  return true;
}

Image first_channel(const Image& img) {
  Image gray(img.height, img.width, 1);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) gray.pixels[i] = img.pixels[i * img.channels];
  return gray;
}

}  // namespace

void validate(const ThermalImage& img) {
  const Image& px = img.pixels;
  if (px.channels != 3) throw ValidationError("image '" + img.id + "' must have 3 channels");
  if (px.height <= 0 || px.width <= 0) throw ValidationError("image '" + img.id + "' is empty");
  for (float v : px.pixels) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw ValidationError("image '" + img.id + "' has pixel values outside [0,1]");
    }
  }
  if (img.mask) {
    if (img.mask->height != px.height || img.mask->width != px.width) {
      throw ValidationError("mask of '" + img.id + "' does not match image dimensions");
    }
    if (img.label == Label::kNormal && img.mask->any()) {
      throw ValidationError("normal image '" + img.id + "' carries a non-empty mask");
    }
  }
}

std::vector<ManifestRow> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw IngestionError("cannot open manifest '" + manifest.string() + "'");

  std::string line;
  if (!std::getline(in, line) || trim(line) != "path,label") {
    throw ValidationError("manifest '" + manifest.string() + "' must start with header 'path,label'");
  }
  std::vector<ManifestRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ValidationError("manifest line " + std::to_string(line_no) + ": expected 2 fields");
    }
    ManifestRow row;
    row.path = trim(line.substr(0, comma));
    const std::string label = trim(line.substr(comma + 1));
    if (row.path.empty()) {
      throw ValidationError("manifest line " + std::to_string(line_no) + ": empty path");
    }
    if (label == "0") {
      row.label = Label::kNormal;
    } else if (label == "1") {
      row.label = Label::kAnomalous;
    } else if (!label.empty()) {
      throw ValidationError("manifest line " + std::to_string(line_no) + " (" + row.path +
                            "): label must be 0, 1 or empty, got '" + label + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_manifest(const fs::path& manifest, std::span<const ManifestRow> rows) {
  std::ofstream out(manifest, std::ios::binary);
  if (!out) throw IoError("cannot write manifest '" + manifest.string() + "'");
  out << "path,label\n";
  for (const auto& row : rows) {
    out << row.path << ',';
    if (row.label) out << to_int(*row.label);
    out << '\n';
  }
}

std::vector<ThermalImage> load_dataset(const fs::path& root, const fs::path& manifest) {
  const auto rows = read_manifest(manifest);
  std::vector<ThermalImage> images;
  images.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const fs::path file = fs::path(row.path).is_absolute() ? fs::path(row.path) : root / row.path;
    if (!fs::exists(file)) {
      throw IngestionError("manifest row " + std::to_string(i + 1) + ": image file '" +
                           file.string() + "' does not exist");
    }
    ThermalImage img;
    img.id = file.stem().string();
    try {
      img.pixels = load_rgb(file);
    } catch (const IoError& e) {
      throw IngestionError("manifest row " + std::to_string(i + 1) + ": " + e.what());
    }
    img.label = row.label;
    const fs::path mask_file = root / "masks" / (img.id + ".png");
    if (fs::exists(mask_file)) img.mask = mask_from_bytes(read_png(mask_file));
    validate(img);
    images.push_back(std::move(img));
  }
  return images;
}

void write_dataset(const fs::path& root, std::span<const ThermalImage> images) {
  fs::create_directories(root / "images");
  std::vector<ManifestRow> rows;
  rows.reserve(images.size());
  for (const auto& img : images) {
    const std::string rel = "images/" + img.id + ".png";
    const Image& px = img.pixels;
    write_png(root / rel, to_bytes(channels_equal(px) ? first_channel(px) : px));
    if (img.mask) {
      fs::create_directories(root / "masks");
      write_png(root / "masks" / (img.id + ".png"), mask_to_bytes(*img.mask));
    }
    rows.push_back({rel, img.label});
  }
  write_manifest(root / "manifest.csv", rows);
}

}  // namespace hotspot::data
