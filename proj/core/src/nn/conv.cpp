#include "hotspot/nn/conv.hpp"

#include <algorithm>
#include <limits>
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

void check_input(const Tensor& x, int channels, const char* layer) {
  if (x.rank() != 4 || x.dim(1) != channels) {
    throw ValidationError(std::string(layer) + ": expected N x " + std::to_string(channels) +
                          " x H x W input, got " + shape_string(x.shape()));
  }
}

}  // namespace

Window window_geometry(int in, int kernel, int stride, Padding padding) {
  Window w;
  if (padding == Padding::kSame) {
    w.out = (in + stride - 1) / stride;
    const int total = std::max((w.out - 1) * stride + kernel - in, 0);
    w.pad_begin = total / 2;
  } else {
    if (in < kernel) throw ValidationError("valid convolution: input smaller than kernel");
    w.out = (in - kernel) / stride + 1;
    w.pad_begin = 0;
  }
  return w;
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(int in_channels, int out_channels, int kernel, int stride, Padding padding,
               bool use_bias, Init& rng)
    : in_(in_channels),
      out_(out_channels),
      kernel_(kernel),
      stride_(stride),
      padding_(padding),
      use_bias_(use_bias),
      weight_(Tensor({out_channels, in_channels, kernel, kernel})),
      bias_(Tensor({use_bias ? out_channels : 0})) {
  if (in_channels <= 0 || out_channels <= 0 || kernel <= 0 || stride <= 0) {
    throw ValidationError("conv2d: sizes must be positive");
  }
  glorot_uniform(weight_.value, in_ * kernel * kernel, out_ * kernel * kernel, rng);
}

void Conv2d::im2col(const double* image, int h, int w, const Window& wy, const Window& wx,
                    double* cols) const {
  const std::size_t hw = static_cast<std::size_t>(wy.out) * wx.out;
  std::size_t row = 0;
  for (int c = 0; c < in_; ++c) {
    const double* plane = image + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < kernel_; ++ky) {
      for (int kx = 0; kx < kernel_; ++kx, ++row) {
        double* dst = cols + row * hw;
        for (int oy = 0; oy < wy.out; ++oy) {
          const int iy = oy * stride_ - wy.pad_begin + ky;
          double* d = dst + static_cast<std::size_t>(oy) * wx.out;
          if (iy < 0 || iy >= h) {
            std::fill(d, d + wx.out, 0.0);
            continue;
          }
          const double* src = plane + static_cast<std::size_t>(iy) * w;
          for (int ox = 0; ox < wx.out; ++ox) {
            const int ix = ox * stride_ - wx.pad_begin + kx;
            d[ox] = (ix >= 0 && ix < w) ? src[ix] : 0.0;
          }
        }
      }
    }
  }
}

void Conv2d::col2im(const double* cols, int h, int w, const Window& wy, const Window& wx,
                    double* image) const {
  const std::size_t hw = static_cast<std::size_t>(wy.out) * wx.out;
  std::size_t row = 0;
  for (int c = 0; c < in_; ++c) {
    double* plane = image + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < kernel_; ++ky) {
      for (int kx = 0; kx < kernel_; ++kx, ++row) {
        const double* src = cols + row * hw;
        for (int oy = 0; oy < wy.out; ++oy) {
          const int iy = oy * stride_ - wy.pad_begin + ky;
          if (iy < 0 || iy >= h) continue;
          double* dst = plane + static_cast<std::size_t>(iy) * w;
          const double* s = src + static_cast<std::size_t>(oy) * wx.out;
          for (int ox = 0; ox < wx.out; ++ox) {
            const int ix = ox * stride_ - wx.pad_begin + kx;
            if (ix >= 0 && ix < w) dst[ix] += s[ox];
          }
        }
      }
    }
  }
}

Tensor Conv2d::forward(const Tensor& x, Context ctx) {
  check_input(x, in_, "conv2d");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const Window wy = window_geometry(h, kernel_, stride_, padding_);
  const Window wx = window_geometry(w, kernel_, stride_, padding_);
  const int k = in_ * kernel_ * kernel_;
  const int hw = wy.out * wx.out;
  const bool pointwise = kernel_ == 1 && stride_ == 1;

  Tensor y({n, out_, wy.out, wx.out});
  ConstMatrixMap wmat(weight_.value.data(), out_, k);
  std::vector<double> cols(pointwise ? 0 : static_cast<std::size_t>(k) * hw);
  for (int i = 0; i < n; ++i) {
    const double* img = x.data() + static_cast<std::size_t>(i) * in_ * h * w;
    const double* col_ptr = img;
    if (!pointwise) {
      im2col(img, h, w, wy, wx, cols.data());
      col_ptr = cols.data();
    }
    MatrixMap out(y.data() + static_cast<std::size_t>(i) * out_ * hw, out_, hw);
    out.noalias() = wmat * ConstMatrixMap(col_ptr, k, hw);
    if (use_bias_) {
      for (int o = 0; o < out_; ++o) out.row(o).array() += bias_.value[static_cast<std::size_t>(o)];
    }
  }
  if (ctx.record) inputs_.push_back(x);
  return y;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
  const Tensor x = pop(inputs_, "conv2d");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const Window wy = window_geometry(h, kernel_, stride_, padding_);
  const Window wx = window_geometry(w, kernel_, stride_, padding_);
  const int k = in_ * kernel_ * kernel_;
  const int hw = wy.out * wx.out;
  const bool pointwise = kernel_ == 1 && stride_ == 1;

  Tensor dx(x.shape());
  ConstMatrixMap wmat(weight_.value.data(), out_, k);
  MatrixMap dw(weight_.grad.data(), out_, k);
  std::vector<double> cols(pointwise ? 0 : static_cast<std::size_t>(k) * hw);
  std::vector<double> dcols(pointwise ? 0 : static_cast<std::size_t>(k) * hw);
  for (int i = 0; i < n; ++i) {
    const double* img = x.data() + static_cast<std::size_t>(i) * in_ * h * w;
    ConstMatrixMap dy(grad_out.data() + static_cast<std::size_t>(i) * out_ * hw, out_, hw);
    if (use_bias_) {
      for (int o = 0; o < out_; ++o) bias_.grad[static_cast<std::size_t>(o)] += dy.row(o).sum();
    }
    double* dimg = dx.data() + static_cast<std::size_t>(i) * in_ * h * w;
    if (pointwise) {
      dw.noalias() += dy * ConstMatrixMap(img, k, hw).transpose();
      MatrixMap(dimg, k, hw).noalias() = wmat.transpose() * dy;
    } else {
      im2col(img, h, w, wy, wx, cols.data());
      dw.noalias() += dy * ConstMatrixMap(cols.data(), k, hw).transpose();
      MatrixMap(dcols.data(), k, hw).noalias() = wmat.transpose() * dy;
      col2im(dcols.data(), h, w, wy, wx, dimg);
    }
  }
  return dx;
}

void Conv2d::for_each_parameter(const std::string& prefix, const ParameterFn& fn) {
  fn(join(prefix, "kernel"), weight_);
  if (use_bias_) fn(join(prefix, "bias"), bias_);
}

std::unique_ptr<Layer> Conv2d::clone() const {
  auto c = std::make_unique<Conv2d>(*this);
  c->clear_trace();
  return c;
}

// ---------------------------------------------------------------- DepthwiseConv2d

DepthwiseConv2d::DepthwiseConv2d(int channels, int kernel, int stride, Padding padding, Init& rng)
    : channels_(channels),
      kernel_(kernel),
      stride_(stride),
      padding_(padding),
      weight_(Tensor({channels, 1, kernel, kernel})) {
  if (channels <= 0 || kernel <= 0 || stride <= 0) {
    throw ValidationError("depthwise_conv2d: sizes must be positive");
  }
  glorot_uniform(weight_.value, kernel * kernel, kernel * kernel, rng);
}

Tensor DepthwiseConv2d::forward(const Tensor& x, Context ctx) {
  check_input(x, channels_, "depthwise_conv2d");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const Window wy = window_geometry(h, kernel_, stride_, padding_);
  const Window wx = window_geometry(w, kernel_, stride_, padding_);
  Tensor y({n, channels_, wy.out, wx.out});
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < channels_; ++c) {
      const double* plane = x.data() + (static_cast<std::size_t>(i) * channels_ + c) * h * w;
      const double* kern = weight_.value.data() + static_cast<std::size_t>(c) * kernel_ * kernel_;
      double* out = y.data() + (static_cast<std::size_t>(i) * channels_ + c) * wy.out * wx.out;
      for (int oy = 0; oy < wy.out; ++oy) {
        for (int ox = 0; ox < wx.out; ++ox) {
          double acc = 0;
          for (int ky = 0; ky < kernel_; ++ky) {
            const int iy = oy * stride_ - wy.pad_begin + ky;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < kernel_; ++kx) {
              const int ix = ox * stride_ - wx.pad_begin + kx;
              if (ix < 0 || ix >= w) continue;
              acc += kern[ky * kernel_ + kx] * plane[static_cast<std::size_t>(iy) * w + ix];
            }
          }
          out[static_cast<std::size_t>(oy) * wx.out + ox] = acc;
        }
      }
    }
  }
  if (ctx.record) inputs_.push_back(x);
  return y;
}

Tensor DepthwiseConv2d::backward(const Tensor& grad_out) {
  const Tensor x = pop(inputs_, "depthwise_conv2d");
  const int n = x.dim(0), h = x.dim(2), w = x.dim(3);
  const Window wy = window_geometry(h, kernel_, stride_, padding_);
  const Window wx = window_geometry(w, kernel_, stride_, padding_);
  Tensor dx(x.shape());
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < channels_; ++c) {
      const std::size_t plane_off = (static_cast<std::size_t>(i) * channels_ + c) * h * w;
      const double* plane = x.data() + plane_off;
      double* dplane = dx.data() + plane_off;
      const double* kern = weight_.value.data() + static_cast<std::size_t>(c) * kernel_ * kernel_;
      double* dkern = weight_.grad.data() + static_cast<std::size_t>(c) * kernel_ * kernel_;
      const double* dy =
          grad_out.data() + (static_cast<std::size_t>(i) * channels_ + c) * wy.out * wx.out;
      for (int oy = 0; oy < wy.out; ++oy) {
        for (int ox = 0; ox < wx.out; ++ox) {
          const double g = dy[static_cast<std::size_t>(oy) * wx.out + ox];
          if (g == 0.0) continue;
          for (int ky = 0; ky < kernel_; ++ky) {
            const int iy = oy * stride_ - wy.pad_begin + ky;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < kernel_; ++kx) {
              const int ix = ox * stride_ - wx.pad_begin + kx;
              if (ix < 0 || ix >= w) continue;
              const std::size_t p = static_cast<std::size_t>(iy) * w + ix;
              dkern[ky * kernel_ + kx] += g * plane[p];
              dplane[p] += g * kern[ky * kernel_ + kx];
            }
          }
        }
      }
    }
  }
  return dx;
}

void DepthwiseConv2d::for_each_parameter(const std::string& prefix, const ParameterFn& fn) {
  fn(join(prefix, "depthwise_kernel"), weight_);
}

std::unique_ptr<Layer> DepthwiseConv2d::clone() const {
  auto c = std::make_unique<DepthwiseConv2d>(*this);
  c->clear_trace();
  return c;
}

// ---------------------------------------------------------------- MaxPool2d

MaxPool2d::MaxPool2d(int kernel, int stride, Padding padding)
    : kernel_(kernel), stride_(stride), padding_(padding) {
  if (kernel <= 0 || stride <= 0) throw ValidationError("max_pool2d: sizes must be positive");
}

Tensor MaxPool2d::forward(const Tensor& x, Context ctx) {
  if (x.rank() != 4) throw ValidationError("max_pool2d: expected rank-4 input");
  const int n = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const Window wy = window_geometry(h, kernel_, stride_, padding_);
  const Window wx = window_geometry(w, kernel_, stride_, padding_);
  Tensor y({n, c, wy.out, wx.out});
  Trace trace;
  trace.input_shape = x.shape();
  if (ctx.record) trace.argmax.resize(y.size());
  std::size_t out_idx = 0;
  for (int i = 0; i < n; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      const std::size_t plane = (static_cast<std::size_t>(i) * c + ch) * h * w;
      for (int oy = 0; oy < wy.out; ++oy) {
        for (int ox = 0; ox < wx.out; ++ox, ++out_idx) {
          double best = -std::numeric_limits<double>::infinity();
          std::size_t best_at = plane;
          for (int ky = 0; ky < kernel_; ++ky) {
            const int iy = oy * stride_ - wy.pad_begin + ky;
            if (iy < 0 || iy >= h) continue;
            for (int kx = 0; kx < kernel_; ++kx) {
              const int ix = ox * stride_ - wx.pad_begin + kx;
              if (ix < 0 || ix >= w) continue;
              const std::size_t p = plane + static_cast<std::size_t>(iy) * w + ix;
              if (x[p] > best) {
                best = x[p];
                best_at = p;
              }
            }
          }
          y[out_idx] = best;
          if (ctx.record) trace.argmax[out_idx] = best_at;
        }
      }
    }
  }
  if (ctx.record) traces_.push_back(std::move(trace));
  return y;
}

Tensor MaxPool2d::backward(const Tensor& grad_out) {
  const Trace trace = pop(traces_, "max_pool2d");
  Tensor dx(trace.input_shape);
  for (std::size_t i = 0; i < grad_out.size(); ++i) dx[trace.argmax[i]] += grad_out[i];
  return dx;
}

std::unique_ptr<Layer> MaxPool2d::clone() const {
  return std::make_unique<MaxPool2d>(kernel_, stride_, padding_);
}

Sequential separable_conv(int in_channels, int out_channels, int kernel, Init& rng) {
  Sequential s;
  s.emplace<DepthwiseConv2d>("depthwise", in_channels, kernel, 1, Padding::kSame, rng);
  s.emplace<Conv2d>("pointwise", in_channels, out_channels, 1, 1, Padding::kSame, false, rng);
  return s;
}

}  // namespace hotspot::nn
