#pragma once

#include <span>
#include <vector>

#include "hotspot/nn/layers.hpp"

namespace hotspot::nn {

// SGD with classical momentum in the Keras form:
//   velocity = momentum * velocity - lr * grad;  value += velocity
class Sgd {
 public:
  Sgd(std::vector<Parameter*> params, double learning_rate, double momentum);

  void step();
  [[nodiscard]] double learning_rate() const { return lr_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> velocity_;
  double lr_;
  double momentum_;
};

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

class Adam {
 public:
  Adam(std::vector<Parameter*> params, AdamOptions options = {});

  void step();

 private:
  std::vector<Parameter*> params_;
  std::vector<Tensor> m_, v_;
  AdamOptions opt_;
  long long t_ = 0;
};

}  // namespace hotspot::nn
