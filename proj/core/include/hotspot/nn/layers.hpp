#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hotspot/nn/tensor.hpp"

namespace hotspot::nn {

struct Parameter {
  Tensor value;
  Tensor grad;
  bool trainable = true;

  Parameter() = default;
  explicit Parameter(Tensor v, bool is_trainable = true)
      : value(std::move(v)), grad(value.shape()), trainable(is_trainable) {}
};

using ParameterFn = std::function<void(const std::string& name, Parameter& p)>;

// How a forward pass behaves. `training` selects batch statistics and updates
// running statistics; `record` keeps what backward() needs.
struct Context {
  bool training = false;
  bool record = false;

  static constexpr Context train() { return {true, true}; }
  static constexpr Context infer() { return {false, false}; }
  // Inference statistics, but differentiable (used for attribution maps).
  static constexpr Context trace() { return {false, true}; }
};

// A differentiable layer. Every recorded forward pushes one trace entry and
// every backward pops the most recent one, so interleaved calls must be
// unwound in reverse order. Parameter gradients accumulate until zeroed.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Tensor forward(const Tensor& x, Context ctx) = 0;
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual void for_each_parameter(const std::string& prefix, const ParameterFn& fn);
  [[nodiscard]] virtual std::unique_ptr<Layer> clone() const = 0;
  virtual void clear_trace() = 0;
  [[nodiscard]] virtual std::string kind() const = 0;
};

std::vector<std::pair<std::string, Parameter*>> named_parameters(Layer& layer,
                                                                 const std::string& prefix = "");
std::vector<Parameter*> trainable_parameters(Layer& layer);
void zero_grad(Layer& layer);
// Trainable values only.
std::size_t parameter_count(Layer& layer);

using Init = std::mt19937_64;

// Glorot/Xavier uniform, the Keras default.
void glorot_uniform(Tensor& t, int fan_in, int fan_out, Init& rng);

class Dense final : public Layer {
 public:
  Dense(int in_features, int out_features, bool use_bias, Init& rng);

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  void for_each_parameter(const std::string& prefix, const ParameterFn& fn) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { inputs_.clear(); }
  [[nodiscard]] std::string kind() const override { return "dense"; }

  Parameter& weight() { return weight_; }  // [in, out]
  Parameter& bias() { return bias_; }
  [[nodiscard]] bool has_bias() const { return use_bias_; }

 private:
  int in_, out_;
  bool use_bias_;
  Parameter weight_;
  Parameter bias_;
  std::vector<Tensor> inputs_;
};

struct BatchNormOptions {
  double momentum = 0.9;  // running = momentum * running + (1 - momentum) * batch
  double epsilon = 1e-3;
};

// Normalizes axis 1 of rank-2 (N×C) or rank-4 (N×C×H×W) input.
class BatchNorm final : public Layer {
 public:
  explicit BatchNorm(int channels, BatchNormOptions options = {});

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  void for_each_parameter(const std::string& prefix, const ParameterFn& fn) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { traces_.clear(); }
  [[nodiscard]] std::string kind() const override { return "batch_norm"; }

  Parameter& gamma() { return gamma_; }
  Parameter& beta() { return beta_; }
  Parameter& running_mean() { return running_mean_; }
  Parameter& running_var() { return running_var_; }
  [[nodiscard]] const BatchNormOptions& options() const { return options_; }

 private:
  struct Trace {
    Tensor normalized;
    std::vector<double> inv_std;
    bool batch_stats = false;
  };

  int channels_;
  BatchNormOptions options_;
  Parameter gamma_, beta_, running_mean_, running_var_;
  std::vector<Trace> traces_;
};

class ReLU final : public Layer {
 public:
  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { outputs_.clear(); }
  [[nodiscard]] std::string kind() const override { return "relu"; }

 private:
  std::vector<Tensor> outputs_;
};

// N×C×H×W → N×C.
class GlobalAvgPool final : public Layer {
 public:
  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { shapes_.clear(); }
  [[nodiscard]] std::string kind() const override { return "global_avg_pool"; }

 private:
  std::vector<std::vector<int>> shapes_;
};

class Sequential final : public Layer {
 public:
  Sequential() = default;
  Sequential(const Sequential& other);
  Sequential& operator=(const Sequential& other);
  Sequential(Sequential&&) noexcept = default;
  Sequential& operator=(Sequential&&) noexcept = default;

  Sequential& add(std::string name, std::unique_ptr<Layer> layer);

  template <typename L, typename... Args>
  L& emplace(std::string name, Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    add(std::move(name), std::move(layer));
    return ref;
  }

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  void for_each_parameter(const std::string& prefix, const ParameterFn& fn) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override;
  [[nodiscard]] std::string kind() const override { return "sequential"; }

  [[nodiscard]] std::size_t size() const { return layers_.size(); }
  [[nodiscard]] bool empty() const { return layers_.empty(); }
  Layer& at(std::size_t i) { return *layers_.at(i).second; }
  [[nodiscard]] const std::string& name_at(std::size_t i) const { return layers_.at(i).first; }

 private:
  std::vector<std::pair<std::string, std::unique_ptr<Layer>>> layers_;
};

// y = main(x) + shortcut(x); an empty shortcut is the identity.
class Residual final : public Layer {
 public:
  Residual(Sequential main, Sequential shortcut);

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  void for_each_parameter(const std::string& prefix, const ParameterFn& fn) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override;
  [[nodiscard]] std::string kind() const override { return "residual"; }

 private:
  Sequential main_;
  Sequential shortcut_;
};

}  // namespace hotspot::nn
