#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hotspot::nn {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;

// Dense row-major array of doubles. Rank-4 tensors are laid out N×C×H×W.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);
  Tensor(std::vector<int> shape, std::vector<double> values);

  [[nodiscard]] const std::vector<int>& shape() const { return shape_; }
  [[nodiscard]] int rank() const { return static_cast<int>(shape_.size()); }
  [[nodiscard]] int dim(int axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  [[nodiscard]] const double* data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  [[nodiscard]] std::span<const double> values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
  [[nodiscard]] double at(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * shape_[1] + j];
  }
  double& at(int n, int c, int h, int w) { return data_[offset(n, c, h, w)]; }
  [[nodiscard]] double at(int n, int c, int h, int w) const { return data_[offset(n, c, h, w)]; }

  void fill(double v);
  [[nodiscard]] Tensor reshaped(std::vector<int> shape) const;

  // Row-major 2-D view; rank-2 tensors only.
  MatrixMap matrix();
  [[nodiscard]] ConstMatrixMap matrix() const;

  bool operator==(const Tensor&) const = default;

 private:
  [[nodiscard]] std::size_t offset(int n, int c, int h, int w) const {
    return ((static_cast<std::size_t>(n) * shape_[1] + c) * shape_[2] + h) * shape_[3] + w;
  }

  std::vector<int> shape_;
  std::vector<double> data_;
};

std::string shape_string(const std::vector<int>& shape);
std::size_t element_count(const std::vector<int>& shape);

}  // namespace hotspot::nn
