#include <benchmark/benchmark.h>

#include <random>

#include "hotspot/nn/conv.hpp"
#include "hotspot/ssl/loss.hpp"

using namespace hotspot;

namespace {

nn::Tensor random_tensor(std::vector<int> shape, std::uint64_t seed) {
  nn::Tensor t(std::move(shape));
  std::mt19937_64 g(seed);
  std::normal_distribution<double> n(0, 1);
  for (auto& v : t.values()) v = n(g);
  return t;
}

void BM_Conv3x3Forward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  nn::Init rng(1);
  nn::Conv2d conv(c, c, 3, 1, nn::Padding::kSame, false, rng);
  const nn::Tensor x = random_tensor({8, c, 32, 32}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conv.forward(x, nn::Context::infer()));
}
BENCHMARK(BM_Conv3x3Forward)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Conv3x3ForwardBackward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  nn::Init rng(1);
  nn::Conv2d conv(c, c, 3, 1, nn::Padding::kSame, false, rng);
  const nn::Tensor x = random_tensor({8, c, 32, 32}, 2);
  const nn::Tensor g = random_tensor({8, c, 32, 32}, 3);
  for (auto _ : state) {
    conv.forward(x, nn::Context::train());
    benchmark::DoNotOptimize(conv.backward(g));
  }
}
BENCHMARK(BM_Conv3x3ForwardBackward)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BatchLoss(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const nn::Tensor p1 = random_tensor({32, d}, 1), z1 = random_tensor({32, d}, 2),
                   p2 = random_tensor({32, d}, 3), z2 = random_tensor({32, d}, 4);
  const ssl::LossConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(ssl::batch_loss(p1, z1, p2, z2, cfg));
}
BENCHMARK(BM_BatchLoss)->Arg(64)->Arg(2048);

}  // namespace
