#include "hotspot/ssl/loss.hpp"

#include <algorithm>
#include <cmath>

#include "hotspot/common/error.hpp"

namespace hotspot::ssl {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("loss arguments must have equal length");
  if (a.empty()) throw ValidationError("loss arguments must be non-empty");
  for (double v : a) {
    if (!std::isfinite(v)) throw NumericDomainError("non-finite value in loss argument");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw NumericDomainError("non-finite value in loss argument");
  }
}

double l2_norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> log_softmax(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  const double lse = m + std::log(s);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - lse;
  return out;
}

// D(p, z) and, optionally, dD/dp.
double cosine_with_grad(std::span<const double> p, std::span<const double> z, double* grad,
                        double scale) {
  const double np = l2_norm(p), nz = l2_norm(z);
  if (np == 0.0 || nz == 0.0) {
    throw NumericDomainError("negative cosine similarity of a zero-norm vector");
  }
  double dot = 0;
  for (std::size_t i = 0; i < p.size(); ++i) dot += p[i] * z[i];
  const double cos = dot / (np * nz);
  if (grad) {
    // d/dp [-(p·ẑ)/|p|] = -(ẑ - cos·p̂)/|p|
    for (std::size_t i = 0; i < p.size(); ++i) {
      grad[i] += scale * -(z[i] / nz - cos * p[i] / np) / np;
    }
  }
  return -std::clamp(cos, -1.0, 1.0);
}

// H(p, z) = -Σ softmax(p) log softmax(z) and, optionally, dH/dp.
double cross_entropy_with_grad(std::span<const double> p, std::span<const double> z,
                               double* grad, double scale) {
  const auto log_q = log_softmax(p);
  const auto log_r = log_softmax(z);
  double h = 0;
  for (std::size_t i = 0; i < p.size(); ++i) h -= std::exp(log_q[i]) * log_r[i];
  if (grad) {
    // dH/dp_j = -q_j (log r_j + H)
    for (std::size_t j = 0; j < p.size(); ++j) {
      grad[j] += scale * -std::exp(log_q[j]) * (log_r[j] + h);
    }
  }
  return std::max(h, 0.0);
}

}  // namespace

std::string to_string(LossVariant v) { return v == LossVariant::kRegular ? "regular" : "compound"; }

LossVariant parse_loss_variant(const std::string& name) {
  if (name == "regular") return LossVariant::kRegular;
  if (name == "compound") return LossVariant::kCompound;
  throw ValidationError("unknown loss variant '" + name + "' (expected regular|compound)");
}

void LossConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be a finite value >= 0");
}

double negative_cosine_similarity(std::span<const double> p, std::span<const double> z) {
  check_pair(p, z);
  return cosine_with_grad(p, z, nullptr, 0.0);
}

double symmetric_similarity_loss(std::span<const double> p1, std::span<const double> z1,
                                 std::span<const double> p2, std::span<const double> z2) {
  return negative_cosine_similarity(p1, z2) + negative_cosine_similarity(p2, z1);
}

double cross_entropy_term(std::span<const double> p, std::span<const double> z) {
  check_pair(p, z);
  return cross_entropy_with_grad(p, z, nullptr, 0.0);
}

double compound_loss(std::span<const double> p1, std::span<const double> z1,
                     std::span<const double> p2, std::span<const double> z2,
                     const LossConfig& cfg) {
  if (cfg.variant != LossVariant::kCompound) {
    throw ValidationError("compound_loss requires the compound loss variant");
  }
  cfg.validate();
  return symmetric_similarity_loss(p1, z1, p2, z2) +
         cfg.beta * (cross_entropy_term(p1, z2) + cross_entropy_term(p2, z1));
}

PairLoss pair_loss(std::span<const double> p1, std::span<const double> z1,
                   std::span<const double> p2, std::span<const double> z2,
                   const LossConfig& cfg) {
  check_pair(p1, z2);
  check_pair(p2, z1);
  if (p1.size() != p2.size()) throw ValidationError("loss arguments must have equal length");
  cfg.validate();
  PairLoss out;
  out.grad_p1.assign(p1.size(), 0.0);
  out.grad_p2.assign(p2.size(), 0.0);
  out.similarity = cosine_with_grad(p1, z2, out.grad_p1.data(), 1.0) +
                   cosine_with_grad(p2, z1, out.grad_p2.data(), 1.0);
  out.total = out.similarity;
  if (cfg.variant == LossVariant::kCompound) {
    out.cross_entropy = cross_entropy_with_grad(p1, z2, out.grad_p1.data(), cfg.beta) +
                        cross_entropy_with_grad(p2, z1, out.grad_p2.data(), cfg.beta);
    out.total += cfg.beta * out.cross_entropy;
  }
  return out;
}

BatchLoss batch_loss(const nn::Tensor& p1, const nn::Tensor& z1, const nn::Tensor& p2,
                     const nn::Tensor& z2, const LossConfig& cfg) {
  if (p1.rank() != 2 || !(p1.shape() == z1.shape()) || !(p1.shape() == p2.shape()) ||
      !(p1.shape() == z2.shape())) {
    throw ValidationError("batch_loss: all four inputs must share one N x D shape");
  }
  const int n = p1.dim(0), d = p1.dim(1);
  BatchLoss out;
  out.grad_p1 = nn::Tensor(p1.shape());
  out.grad_p2 = nn::Tensor(p2.shape());
  auto row = [d](const nn::Tensor& t, int i) {
    return std::span<const double>(t.data() + static_cast<std::size_t>(i) * d,
                                   static_cast<std::size_t>(d));
  };
  for (int i = 0; i < n; ++i) {
    const PairLoss pl = pair_loss(row(p1, i), row(z1, i), row(p2, i), row(z2, i), cfg);
    out.total += pl.total;
    out.similarity += pl.similarity;
    out.cross_entropy += pl.cross_entropy;
    for (int j = 0; j < d; ++j) {
      out.grad_p1.at(i, j) = pl.grad_p1[static_cast<std::size_t>(j)] / n;
      out.grad_p2.at(i, j) = pl.grad_p2[static_cast<std::size_t>(j)] / n;
    }
  }
  out.total /= n;
  out.similarity /= n;
  out.cross_entropy /= n;
  return out;
}

}  // namespace hotspot::ssl
