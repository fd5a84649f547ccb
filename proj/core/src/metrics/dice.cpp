#include "hotspot/metrics/dice.hpp"

#include <cmath>
#include <cstdio>

#include "hotspot/common/error.hpp"

namespace hotspot::metrics {

double dice_compare(const Mask& a, const Mask& b) {
  if (a.height != b.height || a.width != b.width) {
    throw ValidationError("mask dimensions differ: " + std::to_string(a.height) + "x" +
                          std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                          std::to_string(b.width));
  }
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    const bool x = a.bits[i] != 0, y = b.bits[i] != 0;
    na += x;
    nb += y;
    both += x && y;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

DiceSummary dice_summary(std::span<const double> values) {
  if (values.empty()) throw ValidationError("dice summary needs at least one value");
  DiceSummary s;
  s.count = values.size();
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

std::string format_summary(const DiceSummary& s, int mean_decimals, int std_decimals) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.*f±%.*f", mean_decimals, s.mean, std_decimals, s.std);
  return buf;
}

}  // namespace hotspot::metrics
