#pragma once

#include <span>
#include <string>
#include <vector>

#include "hotspot/nn/tensor.hpp"

namespace hotspot::ssl {

enum class LossVariant { kRegular, kCompound };

std::string to_string(LossVariant v);
LossVariant parse_loss_variant(const std::string& name);

struct LossConfig {
  LossVariant variant = LossVariant::kCompound;
  double beta = 2.0 / 3.0;  // weight of the cross-entropy term; ignored by kRegular

  void validate() const;
};

// D(p, z) = -(p/|p|)·(z/|z|). Throws NumericDomainError on a zero-norm argument.
double negative_cosine_similarity(std::span<const double> p, std::span<const double> z);

// D(p1, sg(z2)) + D(p2, sg(z1)).
double symmetric_similarity_loss(std::span<const double> p1, std::span<const double> z1,
                                 std::span<const double> p2, std::span<const double> z2);

// -Σ q log r with q = softmax(p), r = softmax(z). The
// softmax maps raw embeddings onto the simplex so the logarithm is defined.
double cross_entropy_term(std::span<const double> p, std::span<const double> z);

// Symmetric similarity plus beta·(H(p1, sg(z2)) + H(p2, sg(z1))).
// Requires cfg.variant == kCompound.
double compound_loss(std::span<const double> p1, std::span<const double> z1,
                     std::span<const double> p2, std::span<const double> z2,
                     const LossConfig& cfg);

// Value of one view pair with gradients for the predictor outputs only; the
// projections are constants (stop-gradient).
struct PairLoss {
  double total = 0;
  double similarity = 0;
  double cross_entropy = 0;  // unweighted H(p1,z2) + H(p2,z1); zero for kRegular
  std::vector<double> grad_p1;
  std::vector<double> grad_p2;
};

PairLoss pair_loss(std::span<const double> p1, std::span<const double> z1,
                   std::span<const double> p2, std::span<const double> z2,
                   const LossConfig& cfg);

// Batch mean over rows of N×D predictions/projections.
struct BatchLoss {
  double total = 0;
  double similarity = 0;
  double cross_entropy = 0;
  nn::Tensor grad_p1;
  nn::Tensor grad_p2;
};

BatchLoss batch_loss(const nn::Tensor& p1, const nn::Tensor& z1, const nn::Tensor& p2,
                     const nn::Tensor& z2, const LossConfig& cfg);

}  // namespace hotspot::ssl
