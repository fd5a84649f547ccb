#include <benchmark/benchmark.h>

#include <random>

#include "hotspot/baselines/otsu.hpp"
#include "hotspot/baselines/segmenters.hpp"
#include "hotspot/data/augment.hpp"
#include "hotspot/data/synthetic.hpp"

using namespace hotspot;

namespace {

const data::ThermalImage& sample() {
  static const data::ThermalImage img = [] {
    data::SyntheticConfig sc;
    sc.n_images = 1;
    sc.anomalous_fraction = 1.0;
    sc.seed = 4;
    return data::generate_synthetic_dataset(sc).images.front();
  }();
  return img;
}

void BM_MultilevelOtsu(benchmark::State& state) {
  const auto hist = baselines::histogram(baselines::gray_levels(sample().pixels));
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(baselines::multilevel_otsu(hist, n));
}
BENCHMARK(BM_MultilevelOtsu)->Arg(1)->Arg(2)->Arg(4);

void BM_KMeansLab(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(baselines::kmeans_lab_segment(sample().pixels, 2, 0));
}
BENCHMARK(BM_KMeansLab)->Unit(benchmark::kMillisecond);

void BM_AugmentViewPair(benchmark::State& state) {
  const data::AugmentPolicy policy;
  data::Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(data::make_view_pair(sample(), policy, rng));
}
BENCHMARK(BM_AugmentViewPair)->Unit(benchmark::kMillisecond);

}  // namespace
