#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hotspot::metrics {

// One row of predictions.csv: id,label,p0,p1 (label is the predicted class).
struct PredictionRow {
  std::string id;
  int label = 0;
  double p0 = 0, p1 = 0;
};

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows);
// Throws ValidationError naming the line on malformed input.
std::vector<PredictionRow> read_predictions(const std::filesystem::path& path);

}  // namespace hotspot::metrics
