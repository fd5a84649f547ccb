#include "hotspot/ssl/model.hpp"

#include "hotspot/common/error.hpp"
#include "hotspot/nn/conv.hpp"

namespace hotspot::ssl {

using nn::BatchNorm;
using nn::Conv2d;
using nn::Dense;
using nn::MaxPool2d;
using nn::Padding;
using nn::ReLU;
using nn::Sequential;
using nn::Tensor;

std::string to_string(Backbone b) { return b == Backbone::kTiny ? "tiny" : "xception"; }

Backbone parse_backbone(const std::string& name) {
  if (name == "xception") return Backbone::kXception;
  if (name == "tiny") return Backbone::kTiny;
  throw ValidationError("unknown backbone '" + name + "' (expected xception|tiny)");
}

nlohmann::json to_json(const EncoderConfig& cfg) {
  return {{"backbone", to_string(cfg.backbone)},
          {"projection_dim", cfg.projection_dim},
          {"input_size", cfg.input_size}};
}

EncoderConfig encoder_config_from_json(const nlohmann::json& j) {
  EncoderConfig cfg;
  cfg.backbone = parse_backbone(j.at("backbone").get<std::string>());
  cfg.projection_dim = j.at("projection_dim").get<int>();
  cfg.input_size = j.at("input_size").get<int>();
  return cfg;
}

nlohmann::json to_json(const PredictorConfig& cfg) {
  return {{"dim", cfg.dim}, {"hidden", cfg.hidden}};
}

PredictorConfig predictor_config_from_json(const nlohmann::json& j) {
  return {j.at("dim").get<int>(), j.at("hidden").get<int>()};
}

Sequential build_tiny(nn::Init& rng) {
  Sequential s;
  s.emplace<Conv2d>("block1_conv", 3, 8, 3, 2, Padding::kSame, false, rng);
  s.emplace<BatchNorm>("block1_bn", 8);
  s.emplace<ReLU>("block1_act");
  s.emplace<MaxPool2d>("block1_pool", 2, 2, Padding::kSame);
  s.emplace<Conv2d>("block2_conv", 8, 16, 3, 1, Padding::kSame, false, rng);
  s.emplace<BatchNorm>("block2_bn", 16);
  s.emplace<ReLU>("block2_act");
  s.emplace<MaxPool2d>("block2_pool", 2, 2, Padding::kSame);
  s.emplace<Conv2d>("block3_conv", 16, 32, 3, 1, Padding::kSame, false, rng);
  s.emplace<BatchNorm>("block3_bn", 32);
  s.emplace<ReLU>("block3_act");
  return s;
}

int backbone_channels(Backbone b) { return b == Backbone::kTiny ? 32 : 2048; }

namespace {

Sequential make_backbone(Backbone b, nn::Init& rng) {
  return b == Backbone::kTiny ? build_tiny(rng) : build_xception(rng);
}

Sequential make_projection(int in, int dim, nn::Init& rng) {
  Sequential s;
  s.emplace<nn::GlobalAvgPool>("pool");
  s.emplace<Dense>("dense1", in, dim, true, rng);
  s.emplace<BatchNorm>("bn", dim);
  s.emplace<Dense>("dense2", dim, dim, true, rng);
  return s;
}

}  // namespace

Encoder::Encoder(const EncoderConfig& cfg, nn::Init& rng)
    : Encoder(cfg, make_backbone(cfg.backbone, rng), backbone_channels(cfg.backbone), rng) {}

Encoder::Encoder(const EncoderConfig& cfg, Sequential backbone, int feature_channels,
                 nn::Init& rng)
    : cfg_(cfg), feature_channels_(feature_channels), backbone_(std::move(backbone)) {
  if (cfg.projection_dim <= 0 || cfg.input_size <= 0) {
    throw ValidationError("encoder: projection_dim and input_size must be positive");
  }
  projection_ = make_projection(feature_channels, cfg.projection_dim, rng);
}

Tensor Encoder::forward(const Tensor& batch, nn::Context ctx) {
  if (batch.rank() != 4 || batch.dim(1) != 3 || batch.dim(2) != cfg_.input_size ||
      batch.dim(3) != cfg_.input_size) {
    throw ValidationError("encoder expects N x 3 x " + std::to_string(cfg_.input_size) + " x " +
                          std::to_string(cfg_.input_size) + " input, got " +
                          nn::shape_string(batch.shape()));
  }
  return projection_.forward(backbone_.forward(batch, ctx), ctx);
}

Tensor Encoder::backward(const Tensor& grad_projection) {
  return backbone_.backward(projection_.backward(grad_projection));
}

void Encoder::for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn) {
  const std::string p = prefix.empty() ? "" : prefix + ".";
  backbone_.for_each_parameter(p + "backbone", fn);
  projection_.for_each_parameter(p + "projection", fn);
}

void Encoder::clear_trace() {
  backbone_.clear_trace();
  projection_.clear_trace();
}

Predictor::Predictor(const PredictorConfig& cfg, nn::Init& rng) : cfg_(cfg) {
  if (cfg.dim <= 0 || cfg.hidden <= 0) throw ValidationError("predictor: sizes must be positive");
  mlp_.emplace<Dense>("dense1", cfg.dim, cfg.hidden, true, rng);
  mlp_.emplace<BatchNorm>("bn", cfg.hidden);
  mlp_.emplace<Dense>("dense2", cfg.hidden, cfg.dim, true, rng);
}

Tensor Predictor::forward(const Tensor& z, nn::Context ctx) {
  if (z.rank() != 2 || z.dim(1) != cfg_.dim) {
    throw ValidationError("predictor expects N x " + std::to_string(cfg_.dim) + " input, got " +
                          nn::shape_string(z.shape()));
  }
  return mlp_.forward(z, ctx);
}

Tensor Predictor::backward(const Tensor& grad_p) { return mlp_.backward(grad_p); }

void Predictor::for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn) {
  mlp_.for_each_parameter(prefix.empty() ? "predictor" : prefix, fn);
}

Tensor images_to_batch(std::span<const Image> images, int size) {
  Tensor batch({static_cast<int>(images.size()), 3, size, size});
  const std::size_t plane = static_cast<std::size_t>(size) * size;
  for (std::size_t n = 0; n < images.size(); ++n) {
    const Image& img = images[n];
    if (img.height != size || img.width != size || img.channels != 3) {
      throw ValidationError("images_to_batch: expected " + std::to_string(size) + "x" +
                            std::to_string(size) + "x3 image");
    }
    double* dst = batch.data() + n * 3 * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      for (int c = 0; c < 3; ++c) dst[c * plane + i] = img.pixels[i * 3 + static_cast<std::size_t>(c)];
    }
  }
  return batch;
}

}  // namespace hotspot::ssl
