#include "hotspot/metrics/roc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "hotspot/common/error.hpp"

namespace hotspot::metrics {

RocResult auc_roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("score and label counts differ");
  std::int64_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ValidationError("labels must be 0 or 1");
    if (!std::isfinite(scores[i])) throw ValidationError("scores must be finite");
    (labels[i] ? pos : neg) += 1;
  }
  if (pos == 0 || neg == 0) throw ValidationError("ROC needs both classes among the labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocResult res;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  res.curve.push_back({kInf, 0.0, 0.0});
  std::int64_t tp = 0, fp = 0;
  // twice the area, in units of one (positive, negative) cell
  std::int64_t area2 = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    std::int64_t dtp = 0, dfp = 0;
    while (i < order.size() && scores[order[i]] == s) {
      (labels[order[i]] ? dtp : dfp) += 1;
      ++i;
    }
    area2 += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    res.curve.push_back({s, static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
  }
  res.curve.push_back({-kInf, 1.0, 1.0});
  res.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
  return res;
}

void write_roc_csv(const std::filesystem::path& path, const RocResult& roc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "threshold,fpr,tpr\n";
  char buf[128];
  for (const auto& p : roc.curve) {
    if (std::isinf(p.threshold)) {
      out << (p.threshold > 0 ? "inf" : "-inf");
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", p.fpr, p.tpr);
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.threshold, p.fpr, p.tpr);
    }
    out << buf;
  }
}

}  // namespace hotspot::metrics
