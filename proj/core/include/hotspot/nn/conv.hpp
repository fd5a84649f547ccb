#pragma once

#include <vector>

#include "hotspot/nn/layers.hpp"

namespace hotspot::nn {

// TensorFlow padding semantics: kSame gives ceil(in/stride) outputs with the
// odd padding pixel placed at the end; kValid pads nothing.
enum class Padding { kSame, kValid };

struct Window {
  int out = 0;
  int pad_begin = 0;
};

Window window_geometry(int in, int kernel, int stride, Padding padding);

// Standard 2-D convolution, weights [out, in, k, k].
class Conv2d final : public Layer {
 public:
  Conv2d(int in_channels, int out_channels, int kernel, int stride, Padding padding,
         bool use_bias, Init& rng);

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  void for_each_parameter(const std::string& prefix, const ParameterFn& fn) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { inputs_.clear(); }
  [[nodiscard]] std::string kind() const override { return "conv2d"; }

  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  [[nodiscard]] int out_channels() const { return out_; }

 private:
  void im2col(const double* image, int h, int w, const Window& wy, const Window& wx,
              double* cols) const;
  void col2im(const double* cols, int h, int w, const Window& wy, const Window& wx,
              double* image) const;

  int in_, out_, kernel_, stride_;
  Padding padding_;
  bool use_bias_;
  Parameter weight_;
  Parameter bias_;
  std::vector<Tensor> inputs_;
};

// One filter per channel (depth multiplier 1), weights [C, 1, k, k].
class DepthwiseConv2d final : public Layer {
 public:
  DepthwiseConv2d(int channels, int kernel, int stride, Padding padding, Init& rng);

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  void for_each_parameter(const std::string& prefix, const ParameterFn& fn) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { inputs_.clear(); }
  [[nodiscard]] std::string kind() const override { return "depthwise_conv2d"; }

  Parameter& weight() { return weight_; }

 private:
  int channels_, kernel_, stride_;
  Padding padding_;
  Parameter weight_;
  std::vector<Tensor> inputs_;
};

class MaxPool2d final : public Layer {
 public:
  MaxPool2d(int kernel, int stride, Padding padding);

  Tensor forward(const Tensor& x, Context ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  [[nodiscard]] std::unique_ptr<Layer> clone() const override;
  void clear_trace() override { traces_.clear(); }
  [[nodiscard]] std::string kind() const override { return "max_pool2d"; }

 private:
  struct Trace {
    std::vector<int> input_shape;
    std::vector<std::size_t> argmax;
  };
  int kernel_, stride_;
  Padding padding_;
  std::vector<Trace> traces_;
};

// Keras SeparableConv2D without bias: depthwise k×k then pointwise 1×1.
Sequential separable_conv(int in_channels, int out_channels, int kernel, Init& rng);

}  // namespace hotspot::nn
