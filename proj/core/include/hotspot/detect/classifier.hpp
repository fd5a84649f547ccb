#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hotspot/common/image.hpp"
#include "hotspot/nn/layers.hpp"
#include "hotspot/ssl/model.hpp"

namespace hotspot::detect {

using Probs = std::array<double, 2>;  // (normal, anomalous)

struct Prediction {
  int label = 0;
  Probs probs{};
};

// argmax with ties going to 0 (normal).
int argmax_label(const Probs& probs);

// Numerically stable softmax of each row of N×2 logits.
nn::Tensor softmax_rows(const nn::Tensor& logits);

// Backbone features → global average pool → 2-unit dense logits; the softmax is
// applied on output.
class Classifier {
 public:
  Classifier(nn::Sequential backbone, int feature_channels, int input_size, nn::Init& rng);
  // Copies the encoder's backbone; the projection head is dropped.
  static Classifier from_encoder(const ssl::Encoder& encoder, nn::Init& rng);

  nn::Tensor logits(const nn::Tensor& batch, nn::Context ctx);
  nn::Tensor backward(const nn::Tensor& grad_logits);
  // N×2 probabilities in inference mode.
  nn::Tensor probabilities(const nn::Tensor& batch);

  // Resizes to input_size and runs inference.
  Prediction classify(const Image& img);
  std::vector<Prediction> classify_all(std::span<const Image> images, int chunk = 16);

  void for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn);
  void clear_trace();

  [[nodiscard]] int input_size() const { return input_size_; }
  [[nodiscard]] int feature_channels() const { return feature_channels_; }
  nn::Sequential& backbone() { return backbone_; }
  nn::Sequential& head() { return head_; }

  // Set when built from a known encoder config; needed for archiving.
  std::optional<ssl::EncoderConfig> encoder_config;
  std::string provenance;  // source checkpoint id

 private:
  int feature_channels_;
  int input_size_;
  nn::Sequential backbone_;
  nn::Sequential head_;
};

// Archive kind "classifier": backbone tensors under the same names as in a
// pre-training checkpoint, plus head.* tensors.
void save_classifier(const std::filesystem::path& path, Classifier& clf);
Classifier load_classifier(const std::filesystem::path& path);

}  // namespace hotspot::detect
