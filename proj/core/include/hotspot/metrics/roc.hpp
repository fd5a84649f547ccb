#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace hotspot::metrics {

struct RocPoint {
  double threshold;  // predict positive when score ≥ threshold; ±inf at the ends
  double fpr;
  double tpr;
};

struct RocResult {
  double auc = 0;
  std::vector<RocPoint> curve;  // from (0,0) at +inf to (1,1) at -inf
};

// Sweeps every distinct score. The trapezoid area is accumulated in integer
// units of 1/(2·P·N), so it equals the Mann–Whitney statistic exactly.
// Throws ValidationError unless both classes are present.
RocResult auc_roc(std::span<const double> scores, std::span<const int> labels);

void write_roc_csv(const std::filesystem::path& path, const RocResult& roc);

}  // namespace hotspot::metrics
