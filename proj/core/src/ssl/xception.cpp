#include "hotspot/nn/conv.hpp"
#include "hotspot/ssl/model.hpp"

namespace hotspot::ssl {

using nn::BatchNorm;
using nn::Conv2d;
using nn::MaxPool2d;
using nn::Padding;
using nn::ReLU;
using nn::Residual;
using nn::Sequential;

namespace {

void add_sep_bn(Sequential& s, const std::string& name, int in, int out, nn::Init& rng,
                bool relu_first) {
  if (relu_first) s.emplace<ReLU>(name + "_act");
  s.add(name, std::make_unique<Sequential>(nn::separable_conv(in, out, 3, rng)));
  s.emplace<BatchNorm>(name + "_bn", out);
}

// Strided block: two separable convs then 3×3/2 max-pool, with a 1×1/2
// projection shortcut.
std::unique_ptr<Residual> downsample_block(const std::string& prefix, int in, int mid, int out,
                                           bool leading_relu, nn::Init& rng) {
  Sequential main;
  add_sep_bn(main, prefix + "_sepconv1", in, mid, rng, leading_relu);
  add_sep_bn(main, prefix + "_sepconv2", mid, out, rng, true);
  main.emplace<MaxPool2d>(prefix + "_pool", 3, 2, Padding::kSame);
  Sequential shortcut;
  shortcut.emplace<Conv2d>("conv", in, out, 1, 2, Padding::kSame, false, rng);
  shortcut.emplace<BatchNorm>("bn", out);
  return std::make_unique<Residual>(std::move(main), std::move(shortcut));
}

}  // namespace

Sequential build_xception(nn::Init& rng) {
  Sequential s;
  // entry flow
  s.emplace<Conv2d>("block1_conv1", 3, 32, 3, 2, Padding::kValid, false, rng);
  s.emplace<BatchNorm>("block1_conv1_bn", 32);
  s.emplace<ReLU>("block1_conv1_act");
  s.emplace<Conv2d>("block1_conv2", 32, 64, 3, 1, Padding::kValid, false, rng);
  s.emplace<BatchNorm>("block1_conv2_bn", 64);
  s.emplace<ReLU>("block1_conv2_act");
  s.add("block2", downsample_block("block2", 64, 128, 128, false, rng));
  s.add("block3", downsample_block("block3", 128, 256, 256, true, rng));
  s.add("block4", downsample_block("block4", 256, 728, 728, true, rng));

  // middle flow
  for (int b = 5; b <= 12; ++b) {
    const std::string prefix = "block" + std::to_string(b);
    Sequential main;
    for (int k = 1; k <= 3; ++k) {
      add_sep_bn(main, prefix + "_sepconv" + std::to_string(k), 728, 728, rng, true);
    }
    s.add(prefix, std::make_unique<Residual>(std::move(main), Sequential{}));
  }

  // exit flow
  s.add("block13", downsample_block("block13", 728, 728, 1024, true, rng));
  add_sep_bn(s, "block14_sepconv1", 1024, 1536, rng, false);
  s.emplace<ReLU>("block14_sepconv1_act");
  add_sep_bn(s, "block14_sepconv2", 1536, 2048, rng, false);
  s.emplace<ReLU>("block14_sepconv2_act");
  return s;
}

}  // namespace hotspot::ssl
