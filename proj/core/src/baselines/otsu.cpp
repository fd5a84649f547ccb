#include "hotspot/baselines/otsu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hotspot/common/error.hpp"

namespace hotspot::baselines {

std::vector<std::uint8_t> gray_levels(const Image& img) {
  const std::vector<float> lum = luminance(img);
  std::vector<std::uint8_t> out(lum.size());
  for (std::size_t i = 0; i < lum.size(); ++i) {
    const double v = std::clamp(static_cast<double>(lum[i]), 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
  }
  return out;
}

Histogram histogram(std::span<const std::uint8_t> levels) {
  Histogram h{};
  for (auto v : levels) ++h[v];
  return h;
}

namespace {

struct Moments {
  std::array<double, 257> w{};  // cumulative counts
  std::array<double, 257> s{};  // cumulative level sums

  explicit Moments(const Histogram& h) {
    for (int i = 0; i < 256; ++i) {
      w[i + 1] = w[i] + static_cast<double>(h[i]);
      s[i + 1] = s[i] + static_cast<double>(h[i]) * i;
    }
  }
  // S²/W of bins [a, b); -inf when empty.
  [[nodiscard]] double term(int a, int b) const {
    const double ww = w[b] - w[a];
    if (ww <= 0) return -std::numeric_limits<double>::infinity();
    const double ss = s[b] - s[a];
    return ss * ss / ww;
  }
};

bool at_least(double a, double b) {
  // a ≥ b up to relative rounding noise
  return a >= b - 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double between_class_variance(const Histogram& hist, std::span<const int> thresholds) {
  const Moments m(hist);
  const double n = m.w[256];
  if (n <= 0) return 0.0;
  const double mu = m.s[256] / n;
  double sum = 0;
  int prev = 0;
  for (std::size_t k = 0; k <= thresholds.size(); ++k) {
    const int next = k < thresholds.size() ? thresholds[k] : 256;
    const double t = m.term(prev, next);
    if (std::isfinite(t)) sum += t;
    prev = next;
  }
  return sum / n - mu * mu;
}

OtsuResult multilevel_otsu(const Histogram& hist, int n) {
  if (n < 1 || n > 4) throw ValidationError("n_thresholds must lie in [1,4]");
  int occupied = 0;
  for (auto c : hist) occupied += c > 0;
  if (occupied < n + 1) {
    throw SegmentationFailure("histogram has " + std::to_string(occupied) +
                              " occupied levels, too few for " + std::to_string(n) +
                              " thresholds");
  }
  const Moments m(hist);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  // best[j][t]: largest Σ S²/W splitting bins [t,256) into j non-empty classes.
  std::vector<std::array<double, 257>> best(static_cast<std::size_t>(n) + 2);
  for (auto& row : best) row.fill(kNegInf);
  for (int t = 0; t < 256; ++t) best[1][t] = m.term(t, 256);
  for (int j = 2; j <= n + 1; ++j) {
    for (int t = 0; t < 256; ++t) {
      double v = kNegInf;
      for (int u = t + 1; u < 256; ++u) {
        const double head = m.term(t, u);
        if (head == kNegInf || best[j - 1][u] == kNegInf) continue;
        v = std::max(v, head + best[j - 1][u]);
      }
      best[j][t] = v;
    }
  }
  // Forward reconstruction taking the smallest admissible cut each time.
  OtsuResult res;
  int start = 0;
  for (int j = n + 1; j >= 2; --j) {
    const double target = best[j][start];
    int pick = -1;
    for (int u = start + 1; u < 256; ++u) {
      const double head = m.term(start, u);
      if (head == kNegInf || best[j - 1][u] == kNegInf) continue;
      if (at_least(head + best[j - 1][u], target)) {
        pick = u;
        break;
      }
    }
    if (pick < 0) throw SegmentationFailure("threshold search failed");
    res.thresholds.push_back(pick);
    start = pick;
  }
  res.between_class_variance = between_class_variance(hist, res.thresholds);
  return res;
}

}  // namespace hotspot::baselines
