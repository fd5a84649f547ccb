#include "hotspot/ssl/checkpoint.hpp"

#include "hotspot/common/error.hpp"

namespace hotspot::ssl {

nlohmann::json to_json(const data::AugmentParams& p) {
  return {{"translate_max_frac", p.translate_max_frac}, {"flip_prob", p.flip_prob},
          {"blur_sigma_lo", p.blur_sigma_lo},           {"blur_sigma_hi", p.blur_sigma_hi},
          {"jitter_strength", p.jitter_strength},       {"drop_color_prob", p.drop_color_prob},
          {"rotate_max_deg", p.rotate_max_deg},         {"seed", p.seed}};
}

data::AugmentParams augment_params_from_json(const nlohmann::json& j) {
  data::AugmentParams p;
  p.translate_max_frac = j.at("translate_max_frac").get<double>();
  p.flip_prob = j.at("flip_prob").get<double>();
  p.blur_sigma_lo = j.at("blur_sigma_lo").get<double>();
  p.blur_sigma_hi = j.at("blur_sigma_hi").get<double>();
  p.jitter_strength = j.at("jitter_strength").get<double>();
  p.drop_color_prob = j.at("drop_color_prob").get<double>();
  p.rotate_max_deg = j.at("rotate_max_deg").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

namespace {

struct EncoderView final : nn::Layer {
  explicit EncoderView(Encoder& e) : enc(e) {}
  nn::Tensor forward(const nn::Tensor&, nn::Context) override { throw Error("not callable"); }
  nn::Tensor backward(const nn::Tensor&) override { throw Error("not callable"); }
  void for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn) override {
    enc.for_each_parameter(prefix, fn);
  }
  [[nodiscard]] std::unique_ptr<nn::Layer> clone() const override { throw Error("not callable"); }
  void clear_trace() override {}
  [[nodiscard]] std::string kind() const override { return "encoder"; }
  Encoder& enc;
};

struct PredictorView final : nn::Layer {
  explicit PredictorView(Predictor& p) : pred(p) {}
  nn::Tensor forward(const nn::Tensor&, nn::Context) override { throw Error("not callable"); }
  nn::Tensor backward(const nn::Tensor&) override { throw Error("not callable"); }
  void for_each_parameter(const std::string& prefix, const nn::ParameterFn& fn) override {
    pred.for_each_parameter(prefix, fn);
  }
  [[nodiscard]] std::unique_ptr<nn::Layer> clone() const override { throw Error("not callable"); }
  void clear_trace() override {}
  [[nodiscard]] std::string kind() const override { return "predictor"; }
  Predictor& pred;
};

}  // namespace

void store_encoder(nn::Archive& archive, Encoder& encoder) {
  EncoderView view(encoder);
  nn::store_parameters(archive, "", view);
}

std::unique_ptr<Encoder> load_encoder(const nn::Archive& archive, const EncoderConfig& cfg) {
  nn::Init rng(0);
  auto encoder = std::make_unique<Encoder>(cfg, rng);
  EncoderView view(*encoder);
  nn::load_parameters(archive, "", view);
  return encoder;
}

void save_ssl_checkpoint(const std::filesystem::path& path, const SslCheckpoint& meta,
                         Encoder& encoder, Predictor& predictor) {
  nn::Archive archive;
  archive.metadata = {{"kind", "ssl"},
                      {"encoder", to_json(meta.encoder)},
                      {"predictor", to_json(meta.predictor)},
                      {"train", to_json(meta.train)},
                      {"loss", to_json(meta.loss)},
                      {"augment", to_json(meta.augment)}};
  store_encoder(archive, encoder);
  PredictorView view(predictor);
  nn::store_parameters(archive, "", view);
  nn::write_archive(path, archive);
}

LoadedSsl load_ssl_checkpoint(const std::filesystem::path& path) {
  const nn::Archive archive = nn::read_archive(path);
  const auto& m = archive.metadata;
  if (m.value("kind", std::string{}) != "ssl") {
    throw ValidationError("'" + path.string() + "' is not a pre-training checkpoint");
  }
  LoadedSsl out;
  try {
    out.meta.encoder = encoder_config_from_json(m.at("encoder"));
    out.meta.predictor = predictor_config_from_json(m.at("predictor"));
    out.meta.train = train_config_from_json(m.at("train"));
    out.meta.loss = loss_config_from_json(m.at("loss"));
    out.meta.augment = augment_params_from_json(m.at("augment"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("checkpoint metadata is malformed: " + std::string(e.what()));
  }
  out.encoder = load_encoder(archive, out.meta.encoder);
  nn::Init rng(0);
  out.predictor = std::make_unique<Predictor>(out.meta.predictor, rng);
  PredictorView view(*out.predictor);
  nn::load_parameters(archive, "", view);
  return out;
}

}  // namespace hotspot::ssl
