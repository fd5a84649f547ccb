#include "hotspot/nn/optim.hpp"

#include <cmath>

#include "hotspot/common/error.hpp"

namespace hotspot::nn {

Sgd::Sgd(std::vector<Parameter*> params, double learning_rate, double momentum)
    : params_(std::move(params)), lr_(learning_rate), momentum_(momentum) {
  if (learning_rate < 0.0) throw ValidationError("sgd: learning rate must be non-negative");
  if (momentum < 0.0 || momentum >= 1.0) throw ValidationError("sgd: momentum must lie in [0,1)");
  velocity_.reserve(params_.size());
  for (auto* p : params_) velocity_.emplace_back(p->value.shape());
}

void Sgd::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& value = params_[i]->value;
    const auto& grad = params_[i]->grad;
    auto& vel = velocity_[i];
    for (std::size_t k = 0; k < value.size(); ++k) {
      vel[k] = momentum_ * vel[k] - lr_ * grad[k];
      value[k] += vel[k];
    }
  }
}

Adam::Adam(std::vector<Parameter*> params, AdamOptions options)
    : params_(std::move(params)), opt_(options) {
  if (options.learning_rate < 0.0) throw ValidationError("adam: learning rate must be non-negative");
  for (auto* p : params_) {
    m_.emplace_back(p->value.shape());
    v_.emplace_back(p->value.shape());
  }
}

void Adam::step() {
  ++t_;
  const double c1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
  const double lr_t = opt_.learning_rate * std::sqrt(c2) / c1;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& value = params_[i]->value;
    const auto& grad = params_[i]->grad;
    for (std::size_t k = 0; k < value.size(); ++k) {
      m_[i][k] = opt_.beta1 * m_[i][k] + (1 - opt_.beta1) * grad[k];
      v_[i][k] = opt_.beta2 * v_[i][k] + (1 - opt_.beta2) * grad[k] * grad[k];
      value[k] -= lr_t * m_[i][k] / (std::sqrt(v_[i][k]) + opt_.epsilon);
    }
  }
}

}  // namespace hotspot::nn
