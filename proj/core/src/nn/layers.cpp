#include "hotspot/nn/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "hotspot/common/error.hpp"

namespace hotspot::nn {

namespace {

std::string join(const std::string& prefix, const std::string& name) {
  return prefix.empty() ? name : prefix + "." + name;
}

template <typename T>
T pop(std::vector<T>& stack, const char* layer) {
  if (stack.empty()) throw std::logic_error(std::string(layer) + ": backward without a recorded forward");
  T top = std::move(stack.back());
  stack.pop_back();
  return top;
}

}  // namespace

void Layer::for_each_parameter(const std::string&, const ParameterFn&) {}

std::vector<std::pair<std::string, Parameter*>> named_parameters(Layer& layer,
                                                                 const std::string& prefix) {
  std::vector<std::pair<std::string, Parameter*>> out;
  layer.for_each_parameter(prefix, [&](const std::string& name, Parameter& p) {
    out.emplace_back(name, &p);
  });
  return out;
}

std::vector<Parameter*> trainable_parameters(Layer& layer) {
  std::vector<Parameter*> out;
  layer.for_each_parameter("", [&](const std::string&, Parameter& p) {
    if (p.trainable) out.push_back(&p);
  });
  return out;
}

void zero_grad(Layer& layer) {
  layer.for_each_parameter("", [](const std::string&, Parameter& p) { p.grad.fill(0.0); });
}

std::size_t parameter_count(Layer& layer) {
  std::size_t n = 0;
  layer.for_each_parameter("", [&](const std::string&, Parameter& p) {
    if (p.trainable) n += p.value.size();
  });
  return n;
}

void glorot_uniform(Tensor& t, int fan_in, int fan_out, Init& rng) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : t.values()) v = dist(rng);
}

// ---------------------------------------------------------------- Dense

Dense::Dense(int in_features, int out_features, bool use_bias, Init& rng)
    : in_(in_features),
      out_(out_features),
      use_bias_(use_bias),
      weight_(Tensor({in_features, out_features})),
      bias_(Tensor({use_bias ? out_features : 0})) {
  if (in_features <= 0 || out_features <= 0) throw ValidationError("dense: sizes must be positive");
  glorot_uniform(weight_.value, in_, out_, rng);
}

Tensor Dense::forward(const Tensor& x, Context ctx) {
  if (x.rank() != 2 || x.dim(1) != in_) {
    throw ValidationError("dense: expected [N x " + std::to_string(in_) + "] input, got " +
                          shape_string(x.shape()));
  }
  Tensor y({x.dim(0), out_});
  y.matrix().noalias() = x.matrix() * weight_.value.matrix();
  if (use_bias_) {
    for (int n = 0; n < y.dim(0); ++n) {
      for (int j = 0; j < out_; ++j) y.at(n, j) += bias_.value[static_cast<std::size_t>(j)];
    }
  }
  if (ctx.record) inputs_.push_back(x);
  return y;
}

Tensor Dense::backward(const Tensor& grad_out) {
  const Tensor x = pop(inputs_, "dense");
  auto w = weight_.value.matrix();
  weight_.grad.matrix().noalias() += x.matrix().transpose() * grad_out.matrix();
  if (use_bias_) {
    for (int n = 0; n < grad_out.dim(0); ++n) {
      for (int j = 0; j < out_; ++j) bias_.grad[static_cast<std::size_t>(j)] += grad_out.at(n, j);
    }
  }
  Tensor dx({grad_out.dim(0), in_});
  dx.matrix().noalias() = grad_out.matrix() * w.transpose();
  return dx;
}

void Dense::for_each_parameter(const std::string& prefix, const ParameterFn& fn) {
  fn(join(prefix, "kernel"), weight_);
  if (use_bias_) fn(join(prefix, "bias"), bias_);
}

std::unique_ptr<Layer> Dense::clone() const {
  auto c = std::make_unique<Dense>(*this);
  c->clear_trace();
  return c;
}

// ---------------------------------------------------------------- BatchNorm

BatchNorm::BatchNorm(int channels, BatchNormOptions options)
    : channels_(channels),
      options_(options),
      gamma_(Tensor({channels}, 1.0)),
      beta_(Tensor({channels}, 0.0)),
      running_mean_(Tensor({channels}, 0.0), false),
      running_var_(Tensor({channels}, 1.0), false) {
  if (channels <= 0) throw ValidationError("batch_norm: channels must be positive");
}

Tensor BatchNorm::forward(const Tensor& x, Context ctx) {
  if ((x.rank() != 2 && x.rank() != 4) || x.dim(1) != channels_) {
    throw ValidationError("batch_norm: expected channel axis of " + std::to_string(channels_) +
                          ", got " + shape_string(x.shape()));
  }
  const int n = x.dim(0);
  const std::size_t inner = x.rank() == 4 ? static_cast<std::size_t>(x.dim(2)) * x.dim(3) : 1;
  const double count = static_cast<double>(n) * static_cast<double>(inner);

  Trace trace;
  trace.batch_stats = ctx.training;
  trace.normalized = Tensor(x.shape());
  trace.inv_std.resize(static_cast<std::size_t>(channels_));
  Tensor y(x.shape());

  for (int c = 0; c < channels_; ++c) {
    double mean, var;
    if (ctx.training) {
      double sum = 0;
      for (int i = 0; i < n; ++i) {
        const double* p = x.data() + (static_cast<std::size_t>(i) * channels_ + c) * inner;
        for (std::size_t k = 0; k < inner; ++k) sum += p[k];
      }
      mean = sum / count;
      double sq = 0;
      for (int i = 0; i < n; ++i) {
        const double* p = x.data() + (static_cast<std::size_t>(i) * channels_ + c) * inner;
        for (std::size_t k = 0; k < inner; ++k) sq += (p[k] - mean) * (p[k] - mean);
      }
      var = sq / count;
      const auto cc = static_cast<std::size_t>(c);
      running_mean_.value[cc] = options_.momentum * running_mean_.value[cc] + (1 - options_.momentum) * mean;
      running_var_.value[cc] = options_.momentum * running_var_.value[cc] + (1 - options_.momentum) * var;
    } else {
      mean = running_mean_.value[static_cast<std::size_t>(c)];
      var = running_var_.value[static_cast<std::size_t>(c)];
    }
    const double inv_std = 1.0 / std::sqrt(var + options_.epsilon);
    trace.inv_std[static_cast<std::size_t>(c)] = inv_std;
    const double g = gamma_.value[static_cast<std::size_t>(c)];
    const double b = beta_.value[static_cast<std::size_t>(c)];
    for (int i = 0; i < n; ++i) {
      const std::size_t base = (static_cast<std::size_t>(i) * channels_ + c) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        const double xh = (x[base + k] - mean) * inv_std;
        trace.normalized[base + k] = xh;
        y[base + k] = g * xh + b;
      }
    }
  }
  if (ctx.record) traces_.push_back(std::move(trace));
  return y;
}

Tensor BatchNorm::backward(const Tensor& grad_out) {
  const Trace trace = pop(traces_, "batch_norm");
  const Tensor& xh = trace.normalized;
  const int n = grad_out.dim(0);
  const std::size_t inner =
      grad_out.rank() == 4 ? static_cast<std::size_t>(grad_out.dim(2)) * grad_out.dim(3) : 1;
  const double count = static_cast<double>(n) * static_cast<double>(inner);
  Tensor dx(grad_out.shape());

  for (int c = 0; c < channels_; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    double sum_dy = 0, sum_dy_xh = 0;
    for (int i = 0; i < n; ++i) {
      const std::size_t base = (static_cast<std::size_t>(i) * channels_ + c) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        sum_dy += grad_out[base + k];
        sum_dy_xh += grad_out[base + k] * xh[base + k];
      }
    }
    gamma_.grad[cc] += sum_dy_xh;
    beta_.grad[cc] += sum_dy;
    const double g = gamma_.value[cc];
    const double inv_std = trace.inv_std[cc];
    for (int i = 0; i < n; ++i) {
      const std::size_t base = (static_cast<std::size_t>(i) * channels_ + c) * inner;
      for (std::size_t k = 0; k < inner; ++k) {
        if (trace.batch_stats) {
          dx[base + k] = g * inv_std / count *
                         (count * grad_out[base + k] - sum_dy - xh[base + k] * sum_dy_xh);
        } else {
          dx[base + k] = g * inv_std * grad_out[base + k];
        }
      }
    }
  }
  return dx;
}

void BatchNorm::for_each_parameter(const std::string& prefix, const ParameterFn& fn) {
  fn(join(prefix, "gamma"), gamma_);
  fn(join(prefix, "beta"), beta_);
  fn(join(prefix, "moving_mean"), running_mean_);
  fn(join(prefix, "moving_variance"), running_var_);
}

std::unique_ptr<Layer> BatchNorm::clone() const {
  auto c = std::make_unique<BatchNorm>(*this);
  c->clear_trace();
  return c;
}

// ---------------------------------------------------------------- ReLU

Tensor ReLU::forward(const Tensor& x, Context ctx) {
  Tensor y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  if (ctx.record) outputs_.push_back(y);
  return y;
}

Tensor ReLU::backward(const Tensor& grad_out) {
  const Tensor y = pop(outputs_, "relu");
  Tensor dx(grad_out.shape());
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = y[i] > 0.0 ? grad_out[i] : 0.0;
  return dx;
}

std::unique_ptr<Layer> ReLU::clone() const { return std::make_unique<ReLU>(); }

// ---------------------------------------------------------------- GlobalAvgPool

Tensor GlobalAvgPool::forward(const Tensor& x, Context ctx) {
  if (x.rank() != 4) throw ValidationError("global_avg_pool: expected rank-4 input");
  const int n = x.dim(0), c = x.dim(1);
  const std::size_t inner = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  Tensor y({n, c});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < c; ++j) {
      const double* p = x.data() + (static_cast<std::size_t>(i) * c + j) * inner;
      double s = 0;
      for (std::size_t k = 0; k < inner; ++k) s += p[k];
      y.at(i, j) = s / static_cast<double>(inner);
    }
  }
  if (ctx.record) shapes_.push_back(x.shape());
  return y;
}

Tensor GlobalAvgPool::backward(const Tensor& grad_out) {
  const auto shape = pop(shapes_, "global_avg_pool");
  Tensor dx(shape);
  const int n = shape[0], c = shape[1];
  const std::size_t inner = static_cast<std::size_t>(shape[2]) * shape[3];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < c; ++j) {
      const double g = grad_out.at(i, j) / static_cast<double>(inner);
      double* p = dx.data() + (static_cast<std::size_t>(i) * c + j) * inner;
      for (std::size_t k = 0; k < inner; ++k) p[k] = g;
    }
  }
  return dx;
}

std::unique_ptr<Layer> GlobalAvgPool::clone() const { return std::make_unique<GlobalAvgPool>(); }

// ---------------------------------------------------------------- Sequential

Sequential::Sequential(const Sequential& other) {
  for (const auto& [name, layer] : other.layers_) layers_.emplace_back(name, layer->clone());
}

Sequential& Sequential::operator=(const Sequential& other) {
  if (this != &other) {
    Sequential copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Sequential& Sequential::add(std::string name, std::unique_ptr<Layer> layer) {
  layers_.emplace_back(std::move(name), std::move(layer));
  return *this;
}

Tensor Sequential::forward(const Tensor& x, Context ctx) {
  Tensor h = x;
  for (auto& [name, layer] : layers_) h = layer->forward(h, ctx);
  return h;
}

Tensor Sequential::backward(const Tensor& grad_out) {
  Tensor g = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = it->second->backward(g);
  return g;
}

void Sequential::for_each_parameter(const std::string& prefix, const ParameterFn& fn) {
  for (auto& [name, layer] : layers_) layer->for_each_parameter(join(prefix, name), fn);
}

std::unique_ptr<Layer> Sequential::clone() const { return std::make_unique<Sequential>(*this); }

void Sequential::clear_trace() {
  for (auto& [name, layer] : layers_) layer->clear_trace();
}

// ---------------------------------------------------------------- Residual

Residual::Residual(Sequential main, Sequential shortcut)
    : main_(std::move(main)), shortcut_(std::move(shortcut)) {}

Tensor Residual::forward(const Tensor& x, Context ctx) {
  Tensor y = main_.forward(x, ctx);
  const Tensor s = shortcut_.empty() ? x : shortcut_.forward(x, ctx);
  if (!(y.shape() == s.shape())) {
    throw ValidationError("residual: branch shapes differ " + shape_string(y.shape()) + " vs " +
                          shape_string(s.shape()));
  }
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s[i];
  return y;
}

Tensor Residual::backward(const Tensor& grad_out) {
  // Shortcut was run after main, so unwind it first.
  Tensor ds = shortcut_.empty() ? grad_out : shortcut_.backward(grad_out);
  const Tensor dm = main_.backward(grad_out);
  for (std::size_t i = 0; i < ds.size(); ++i) ds[i] += dm[i];
  return ds;
}

void Residual::for_each_parameter(const std::string& prefix, const ParameterFn& fn) {
  main_.for_each_parameter(join(prefix, "main"), fn);
  shortcut_.for_each_parameter(join(prefix, "shortcut"), fn);
}

std::unique_ptr<Layer> Residual::clone() const {
  return std::make_unique<Residual>(Sequential(main_), Sequential(shortcut_));
}

void Residual::clear_trace() {
  main_.clear_trace();
  shortcut_.clear_trace();
}

}  // namespace hotspot::nn
