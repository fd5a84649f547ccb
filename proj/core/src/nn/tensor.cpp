#include "hotspot/nn/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "hotspot/common/error.hpp"

namespace hotspot::nn {

std::size_t element_count(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ValidationError("negative tensor dimension in " + shape_string(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_string(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<int> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
  if (data_.size() != element_count(shape_)) {
    throw ValidationError("tensor value count does not match shape " + shape_string(shape_));
  }
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (element_count(shape) != data_.size()) {
    throw ValidationError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  return Tensor(std::move(shape), data_);
}

MatrixMap Tensor::matrix() {
  if (rank() != 2) throw ValidationError("matrix view needs a rank-2 tensor");
  return MatrixMap(data_.data(), shape_[0], shape_[1]);
}

ConstMatrixMap Tensor::matrix() const {
  if (rank() != 2) throw ValidationError("matrix view needs a rank-2 tensor");
  return ConstMatrixMap(data_.data(), shape_[0], shape_[1]);
}

}  // namespace hotspot::nn
