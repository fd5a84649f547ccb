#pragma once

#include <filesystem>
#include <memory>

#include <nlohmann/json.hpp>

#include "hotspot/data/augment.hpp"
#include "hotspot/nn/archive.hpp"
#include "hotspot/ssl/loss.hpp"
#include "hotspot/ssl/model.hpp"
#include "hotspot/ssl/train.hpp"

namespace hotspot::ssl {

nlohmann::json to_json(const data::AugmentParams& p);
data::AugmentParams augment_params_from_json(const nlohmann::json& j);

struct SslCheckpoint {
  EncoderConfig encoder;
  PredictorConfig predictor;
  TrainConfig train;
  LossConfig loss;
  data::AugmentParams augment;
};

// Writes encoder and predictor weights plus every setting needed to resume or
// reproduce the run. The archive kind is "ssl".
void save_ssl_checkpoint(const std::filesystem::path& path, const SslCheckpoint& meta,
                         Encoder& encoder, Predictor& predictor);

struct LoadedSsl {
  SslCheckpoint meta;
  std::unique_ptr<Encoder> encoder;
  std::unique_ptr<Predictor> predictor;
};

// Rebuilds the networks from the stored configs and fills their weights.
// Throws ValidationError on a wrong kind, version or tensor layout.
LoadedSsl load_ssl_checkpoint(const std::filesystem::path& path);

// Shared by the classifier archive: reads only the encoder part.
std::unique_ptr<Encoder> load_encoder(const nn::Archive& archive, const EncoderConfig& cfg);
void store_encoder(nn::Archive& archive, Encoder& encoder);

}  // namespace hotspot::ssl
