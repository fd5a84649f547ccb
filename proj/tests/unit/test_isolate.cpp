#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "hotspot/common/error.hpp"
#include "hotspot/isolate/gradcam.hpp"
#include "hotspot/isolate/overlay.hpp"
#include "hotspot/isolate/regions.hpp"
#include "hotspot/nn/conv.hpp"

using namespace hotspot;
using namespace hotspot::isolate;

namespace {

struct Toy {
  detect::Classifier clf;
  nn::Tensor kernel;  // 1×3×3×3
  double bias;
  double w0, w1;
};

// One 3×3 conv channel over a 4×4 input, then GAP and a 1→2 linear head.
Toy make_toy(std::uint64_t seed, double w0, double w1) {
  nn::Init rng(seed);
  nn::Sequential bb;
  bb.emplace<nn::Conv2d>("conv", 3, 1, 3, 1, nn::Padding::kSame, true, rng);
  detect::Classifier clf(std::move(bb), 1, 4, rng);
  Toy t{std::move(clf), {}, -0.2, w0, w1};
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n(0, 0.5);
  t.clf.for_each_parameter("", [&](const std::string& name, nn::Parameter& p) {
    if (name.find("conv.kernel") != std::string::npos) {
      for (auto& v : p.value.values()) v = n(g);
      t.kernel = p.value;
    } else if (name.find("conv.bias") != std::string::npos) {
      p.value[0] = t.bias;
    } else if (name.find("dense.kernel") != std::string::npos) {
      p.value[0] = w0;
      p.value[1] = w1;
    } else if (name.find("dense.bias") != std::string::npos) {
      p.value[0] = 0.3;
      p.value[1] = -0.1;
    }
  });
  return t;
}

// Manual chain rule: d logit_c / d F(y,x) = w_c / 16, so the weighted map is
// relu(w_c / 16 · F).
std::vector<double> hand_heatmap(const Toy& t, const Image& img, int cls) {
  std::vector<double> f(16);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      double s = t.bias;
      for (int c = 0; c < 3; ++c) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int yy = y + dy, xx = x + dx;
            if (yy < 0 || yy >= 4 || xx < 0 || xx >= 4) continue;
            s += t.kernel.at(0, c, dy + 1, dx + 1) * img.at(yy, xx, c);
          }
        }
      }
      f[static_cast<std::size_t>(y * 4 + x)] = s;
    }
  }
  const double alpha = (cls == 0 ? t.w0 : t.w1) / 16.0;
  double peak = 0;
  for (auto& v : f) {
    v = std::max(0.0, alpha * v);
    peak = std::max(peak, v);
  }
  if (peak > 0) {
    for (auto& v : f) v /= peak;
  }
  return f;
}

Heatmap bumps(int h, int w, const std::vector<std::array<double, 2>>& centres, double sigma) {
  Heatmap hm;
  hm.height = h;
  hm.width = w;
  hm.values.assign(static_cast<std::size_t>(h) * w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0;
      for (const auto& c : centres) {
        const double d2 = (y - c[0]) * (y - c[0]) + (x - c[1]) * (x - c[1]);
        v = std::max(v, std::exp(-d2 / (2 * sigma * sigma)));
      }
      hm.values[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  return hm;
}

Image random_image(int h, int w, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<float> u(0, 1);
  Image img(h, w, 3);
  for (auto& v : img.pixels) v = u(g);
  return img;
}

}  // namespace

TEST(GradCam, ToyNetworkMatchesHandChainRule) {
  Toy t = make_toy(21, -0.7, 1.3);
  const Image img = random_image(4, 4, 22);
  for (int cls : {0, 1}) {
    const Heatmap hm = gradcam_heatmap(t.clf, img, cls, "toy");
    const auto want = hand_heatmap(t, img, cls);
    ASSERT_EQ(hm.height, 4);
    ASSERT_EQ(hm.width, 4);
    EXPECT_EQ(hm.class_index, cls);
    EXPECT_EQ(hm.source_image_id, "toy");
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(hm.values[i], want[i], 1e-5) << cls << " " << i;
  }
}

TEST(GradCam, ConstantHeadGivesZeroMap) {
  Toy t = make_toy(23, 0.0, 0.0);
  const Heatmap hm = gradcam_heatmap(t.clf, random_image(4, 4, 24));
  for (double v : hm.values) EXPECT_EQ(v, 0.0);
}

TEST(GradCam, ShapeRangeAndClassValidation) {
  nn::Init rng(25);
  ssl::Encoder enc(ssl::EncoderConfig{ssl::Backbone::kTiny, 8, 32}, rng);
  detect::Classifier clf = detect::Classifier::from_encoder(enc, rng);
  const Image img = random_image(45, 61, 26);
  const Heatmap hm = gradcam_heatmap(clf, img);
  EXPECT_EQ(hm.height, 45);
  EXPECT_EQ(hm.width, 61);
  const auto [lo, hi] = std::minmax_element(hm.values.begin(), hm.values.end());
  EXPECT_GE(*lo, 0.0);
  EXPECT_TRUE(*hi == 1.0 || *hi == 0.0);
  EXPECT_THROW(gradcam_heatmap(clf, img, 2), ValidationError);
}

TEST(GradCam, FinalizeNormalizesExactly) {
  std::mt19937_64 g(27);
  std::uniform_real_distribution<double> u(0, 3);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> m(35);
    for (auto& v : m) v = u(g);
    const Heatmap hm = finalize_heatmap(m, 5, 7, 23, 31);
    EXPECT_EQ(*std::max_element(hm.values.begin(), hm.values.end()), 1.0);
    EXPECT_GE(*std::min_element(hm.values.begin(), hm.values.end()), 0.0);
  }
  const Heatmap zero = finalize_heatmap(std::vector<double>(4, 0.0), 2, 2, 8, 8);
  for (double v : zero.values) EXPECT_EQ(v, 0.0);
}

TEST(GradCam, WeightedMapRectifies) {
  // Two channels: α = (1, -1); map = relu((F0 - F1) / 2).
  nn::Tensor f({1, 2, 1, 2}, {3, 1, 1, 3});
  nn::Tensor grad({1, 2, 1, 2}, {1, 1, -1, -1});
  const auto m = weighted_activation_map(f, grad);
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_DOUBLE_EQ(m[1], 0.0);
}

TEST(Isolation, ZeroHeatmapGivesEmptyRegion) {
  const Heatmap hm = bumps(20, 20, {}, 3);
  const HotspotRegion r = isolate_hotspots(hm);
  EXPECT_TRUE(r.components.empty());
  EXPECT_EQ(std::count(r.mask.bits.begin(), r.mask.bits.end(), 1), 0);
}

TEST(Isolation, GaussianBumpLevelSet) {
  const double sigma = 6;
  const Heatmap hm = bumps(64, 64, {{30.0, 25.0}}, sigma);
  const HotspotRegion r = isolate_hotspots(hm, {0.5, 20});
  ASSERT_EQ(r.components.size(), 1u);
  EXPECT_NEAR(r.components[0].centroid_y, 30.0, 1.0);
  EXPECT_NEAR(r.components[0].centroid_x, 25.0, 1.0);
  const double analytic = std::numbers::pi * 2 * sigma * sigma * std::log(2.0);
  EXPECT_NEAR(r.components[0].area, analytic, 0.05 * analytic);
}

TEST(Isolation, TwoBumpsTwoComponents) {
  const double sigma = 5;
  const Heatmap hm = bumps(80, 100, {{20.0, 20.0}, {55.0, 70.0}}, sigma);
  const HotspotRegion r = isolate_hotspots(hm);
  ASSERT_EQ(r.components.size(), 2u);
  const double analytic = std::numbers::pi * 2 * sigma * sigma * std::log(2.0);
  for (const auto& c : r.components) EXPECT_NEAR(c.area, analytic, 0.05 * analytic);
  EXPECT_GE(r.components[0].area, r.components[1].area);
}

TEST(Isolation, MinAreaDropsSpecks) {
  Heatmap hm = bumps(40, 40, {{20.0, 20.0}}, 4);
  hm.values[0] = 1.0;  // single-pixel speck
  const HotspotRegion r = isolate_hotspots(hm, {0.5, 20});
  EXPECT_EQ(r.components.size(), 1u);
  EXPECT_EQ(r.mask.at(0, 0), 0);
  EXPECT_EQ(isolate_hotspots(hm, {0.5, 1}).components.size(), 2u);
}

TEST(Isolation, EightConnectivityAndAreaSum) {
  Mask m(5, 5);
  m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1;  // diagonal chain
  m.at(4, 0) = 1;
  std::vector<int> labels;
  const auto comps = connected_components(m, &labels);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(labels[0], labels[6]);
  EXPECT_EQ(labels[6], labels[12]);
  EXPECT_NE(labels[20], labels[0]);
  int total = 0;
  for (const auto& c : comps) total += c.area;
  EXPECT_EQ(total, 4);
}

TEST(Isolation, ThresholdMonotonicity) {
  std::mt19937_64 g(28);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 30; ++t) {
    Heatmap hm;
    hm.height = 32;
    hm.width = 32;
    // Smooth random field: sum of a few random bumps.
    std::vector<std::array<double, 2>> c;
    for (int k = 0; k < 4; ++k) c.push_back({u(g) * 32, u(g) * 32});
    hm = bumps(32, 32, c, 2 + 4 * u(g));
    const double t1 = u(g), t2 = t1 + (1 - t1) * u(g);
    for (int min_area : {0, 20}) {
      const Mask a = isolate_hotspots(hm, {t1, min_area}).mask;
      const Mask b = isolate_hotspots(hm, {t2, min_area}).mask;
      for (std::size_t i = 0; i < a.bits.size(); ++i) EXPECT_LE(b.bits[i], a.bits[i]);
    }
  }
}

TEST(Overlay, LayoutAndUntouchedThirdPanel) {
  const Image img = random_image(12, 10, 29);
  const Heatmap hm = bumps(12, 10, {{6.0, 5.0}}, 2);
  HotspotRegion empty{Mask(12, 10), {}};
  const ByteImage out = render_overlay(img, hm, empty);
  EXPECT_EQ(out.width, 30);
  EXPECT_EQ(out.height, 12);
  EXPECT_EQ(out.channels, 3);
  const ByteImage in = to_bytes(img);
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 10; ++x) {
      for (int c = 0; c < 3; ++c) {
        const auto src = in.bytes[static_cast<std::size_t>((y * 10 + x) * 3 + c)];
        EXPECT_EQ(out.bytes[static_cast<std::size_t>((y * 30 + x) * 3 + c)], src);
        EXPECT_EQ(out.bytes[static_cast<std::size_t>((y * 30 + 20 + x) * 3 + c)], src);
      }
    }
  }
  HotspotRegion wrong{Mask(3, 3), {}};
  EXPECT_THROW(render_overlay(img, hm, wrong), ValidationError);
}

TEST(Overlay, FileRoundTrip) {
  const Image img = random_image(16, 16, 30);
  const Heatmap hm = bumps(16, 16, {{8.0, 8.0}}, 3);
  const HotspotRegion r = isolate_hotspots(hm, {0.5, 1});
  const auto path = std::filesystem::temp_directory_path() / "hotspot_overlay_test.png";
  write_overlay(path, img, hm, r);
  EXPECT_EQ(read_png(path), render_overlay(img, hm, r));
  std::filesystem::remove(path);
}

TEST(Overlay, RegionJson) {
  const HotspotRegion r = isolate_hotspots(bumps(30, 30, {{10.0, 12.0}}, 3));
  const auto j = to_json(r);
  ASSERT_EQ(j.at("components").size(), 1u);
  EXPECT_EQ(j.at("components")[0].at("area").get<int>(), r.components[0].area);
}
