#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "hotspot/common/image.hpp"
#include "hotspot/nn/layers.hpp"

namespace hotspot::ssl {

enum class Backbone { kXception, kTiny };

std::string to_string(Backbone b);
Backbone parse_backbone(const std::string& name);

struct EncoderConfig {
  Backbone backbone = Backbone::kXception;
  int projection_dim = 2048;
  int input_size = 224;
};

struct PredictorConfig {
  int dim = 2048;
  int hidden = 512;
};

nlohmann::json to_json(const EncoderConfig& cfg);
EncoderConfig encoder_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PredictorConfig& cfg);
PredictorConfig predictor_config_from_json(const nlohmann::json& j);

// Xception feature extractor as originally described (entry, 8 middle blocks,
// exit flow), without its classification top. 2048 output channels.
nn::Sequential build_xception(nn::Init& rng);

// Three conv/BN/ReLU blocks (8, 16, 32 channels), stride 8 overall.
nn::Sequential build_tiny(nn::Init& rng);

int backbone_channels(Backbone b);

// backbone → global average pool → dense → batch norm → dense.
class Encoder {
 public:
  Encoder(const EncoderConfig& cfg, nn::Init& rng);
  // Custom feature extractor; `feature_channels` is its output channel count.
  Encoder(const EncoderConfig& cfg, nn::Sequential backbone, int feature_channels, nn::Init& rng);

  // batch: N×3×S×S with S = input_size. Returns N×projection_dim.
  nn::Tensor forward(const nn::Tensor& batch, nn::Context ctx);
  // Returns the gradient w.r.t. the input batch.
  nn::Tensor backward(const nn::Tensor& grad_projection);

  void for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn);
  void clear_trace();

  [[nodiscard]] const EncoderConfig& config() const { return cfg_; }
  [[nodiscard]] int feature_channels() const { return feature_channels_; }
  nn::Sequential& backbone() { return backbone_; }
  [[nodiscard]] const nn::Sequential& backbone() const { return backbone_; }
  nn::Sequential& projection() { return projection_; }

 private:
  EncoderConfig cfg_;
  int feature_channels_;
  nn::Sequential backbone_;
  nn::Sequential projection_;
};

// dense → batch norm → dense, projection_dim → hidden → projection_dim.
class Predictor {
 public:
  Predictor(const PredictorConfig& cfg, nn::Init& rng);

  nn::Tensor forward(const nn::Tensor& z, nn::Context ctx);
  nn::Tensor backward(const nn::Tensor& grad_p);

  void for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn);
  void clear_trace() { mlp_.clear_trace(); }

  [[nodiscard]] const PredictorConfig& config() const { return cfg_; }
  nn::Sequential& mlp() { return mlp_; }

 private:
  PredictorConfig cfg_;
  nn::Sequential mlp_;
};

// Stacks S×S×3 images into an N×3×S×S tensor; every image must be size×size.
nn::Tensor images_to_batch(std::span<const Image> images, int size);

}  // namespace hotspot::ssl
