#include "hotspot/detect/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "hotspot/common/error.hpp"
#include "hotspot/nn/archive.hpp"

namespace hotspot::detect {

int argmax_label(const Probs& probs) { return probs[1] > probs[0] ? 1 : 0; }

nn::Tensor softmax_rows(const nn::Tensor& logits) {
  nn::Tensor out(logits.shape());
  const int n = logits.dim(0), k = logits.dim(1);
  for (int i = 0; i < n; ++i) {
    double m = logits.at(i, 0);
    for (int j = 1; j < k; ++j) m = std::max(m, logits.at(i, j));
    double s = 0;
    for (int j = 0; j < k; ++j) s += std::exp(logits.at(i, j) - m);
    for (int j = 0; j < k; ++j) out.at(i, j) = std::exp(logits.at(i, j) - m) / s;
  }
  return out;
}

Classifier::Classifier(nn::Sequential backbone, int feature_channels, int input_size,
                       nn::Init& rng)
    : feature_channels_(feature_channels),
      input_size_(input_size),
      backbone_(std::move(backbone)) {
  if (feature_channels < 1) throw ValidationError("feature_channels must be positive");
  if (input_size < 1) throw ValidationError("input_size must be positive");
  head_.emplace<nn::GlobalAvgPool>("pool");
  head_.emplace<nn::Dense>("dense", feature_channels, 2, true, rng);
}

Classifier Classifier::from_encoder(const ssl::Encoder& encoder, nn::Init& rng) {
  Classifier clf(encoder.backbone(), encoder.feature_channels(), encoder.config().input_size, rng);
  clf.encoder_config = encoder.config();
  return clf;
}

nn::Tensor Classifier::logits(const nn::Tensor& batch, nn::Context ctx) {
  if (batch.rank() != 4 || batch.dim(2) != input_size_ || batch.dim(3) != input_size_) {
    throw ValidationError("classifier expects N×C×" + std::to_string(input_size_) + "×" +
                          std::to_string(input_size_) + " input, got " +
                          nn::shape_string(batch.shape()));
  }
  return head_.forward(backbone_.forward(batch, ctx), ctx);
}

nn::Tensor Classifier::backward(const nn::Tensor& grad_logits) {
  return backbone_.backward(head_.backward(grad_logits));
}

nn::Tensor Classifier::probabilities(const nn::Tensor& batch) {
  return softmax_rows(logits(batch, nn::Context::infer()));
}

Prediction Classifier::classify(const Image& img) {
  const Image resized = resize_bilinear(img, input_size_, input_size_);
  const nn::Tensor p = probabilities(ssl::images_to_batch({&resized, 1}, input_size_));
  Prediction out;
  out.probs = {p.at(0, 0), p.at(0, 1)};
  out.label = argmax_label(out.probs);
  return out;
}

std::vector<Prediction> Classifier::classify_all(std::span<const Image> images, int chunk) {
  std::vector<Prediction> out;
  out.reserve(images.size());
  for (std::size_t start = 0; start < images.size(); start += static_cast<std::size_t>(chunk)) {
    const std::size_t end = std::min(images.size(), start + static_cast<std::size_t>(chunk));
    std::vector<Image> resized;
    for (std::size_t i = start; i < end; ++i) {
      resized.push_back(resize_bilinear(images[i], input_size_, input_size_));
    }
    const nn::Tensor p = probabilities(ssl::images_to_batch(resized, input_size_));
    for (int i = 0; i < p.dim(0); ++i) {
      Prediction pred;
      pred.probs = {p.at(i, 0), p.at(i, 1)};
      pred.label = argmax_label(pred.probs);
      out.push_back(pred);
    }
  }
  return out;
}

void Classifier::for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn) {
  const std::string p = prefix.empty() ? "" : prefix + ".";
  backbone_.for_each_parameter(p + "backbone", fn);
  head_.for_each_parameter(p + "head", fn);
}

void Classifier::clear_trace() {
  backbone_.clear_trace();
  head_.clear_trace();
}

namespace {

void store(nn::Archive& archive, Classifier& clf) {
  clf.for_each_parameter("", [&](const std::string& name, nn::Parameter& p) {
    archive.tensors.push_back({name, p.value});
  });
}

void restore(const nn::Archive& archive, Classifier& clf) {
  clf.for_each_parameter("", [&](const std::string& name, nn::Parameter& p) {
    const auto* e = archive.find(name);
    if (!e) throw ValidationError("archive is missing tensor '" + name + "'");
    if (e->tensor.shape() != p.value.shape()) {
      throw ValidationError("archive tensor '" + name + "' has shape " +
                            nn::shape_string(e->tensor.shape()) + ", expected " +
                            nn::shape_string(p.value.shape()));
    }
    p.value = e->tensor;
  });
}

}  // namespace

void save_classifier(const std::filesystem::path& path, Classifier& clf) {
  if (!clf.encoder_config) {
    throw ValidationError("only classifiers built from a registered backbone can be archived");
  }
  nn::Archive archive;
  archive.metadata = {{"kind", "classifier"},
                      {"encoder", ssl::to_json(*clf.encoder_config)},
                      {"feature_channels", clf.feature_channels()},
                      {"provenance", clf.provenance}};
  store(archive, clf);
  nn::write_archive(path, archive);
}

Classifier load_classifier(const std::filesystem::path& path) {
  const nn::Archive archive = nn::read_archive(path);
  const auto& m = archive.metadata;
  if (m.value("kind", std::string{}) != "classifier") {
    throw ValidationError("'" + path.string() + "' is not a classifier archive");
  }
  ssl::EncoderConfig cfg;
  try {
    cfg = ssl::encoder_config_from_json(m.at("encoder"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("classifier metadata is malformed: " + std::string(e.what()));
  }
  nn::Init rng(0);
  nn::Sequential backbone =
      cfg.backbone == ssl::Backbone::kXception ? ssl::build_xception(rng) : ssl::build_tiny(rng);
  Classifier clf(std::move(backbone), ssl::backbone_channels(cfg.backbone), cfg.input_size, rng);
  clf.encoder_config = cfg;
  clf.provenance = m.value("provenance", std::string{});
  restore(archive, clf);
  return clf;
}

}  // namespace hotspot::detect
