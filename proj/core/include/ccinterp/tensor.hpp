#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ccinterp/errors.hpp"

namespace ccinterp {

/// Dense row-major tensor of rank <= 4 with explicit strides. The last index
/// runs fastest.
class Tensor {
 public:
  static constexpr std::size_t kMaxRank = 4;

  Tensor() = default;

  explicit Tensor(std::initializer_list<std::size_t> dims) { reset(std::span(dims.begin(), dims.size())); }
  explicit Tensor(std::span<const std::size_t> dims) { reset(dims); }
  explicit Tensor(const std::vector<std::size_t>& dims) {
    reset(std::span<const std::size_t>(dims.data(), dims.size()));
  }

  std::size_t rank() const noexcept { return rank_; }
  std::size_t dim(std::size_t mode) const { return dims_[mode]; }
  std::vector<std::size_t> dims() const { return {dims_.begin(), dims_.begin() + rank_}; }
  std::size_t stride(std::size_t mode) const { return strides_[mode]; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * strides_[0] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * strides_[0] + j]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[i * strides_[0] + j * strides_[1] + k * strides_[2] + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[i * strides_[0] + j * strides_[1] + k * strides_[2] + l];
  }

  bool same_shape(const Tensor& o) const {
    return rank_ == o.rank_ && std::equal(dims_.begin(), dims_.begin() + rank_, o.dims_.begin());
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  double norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  Tensor& operator+=(const Tensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  /// this += s * o
  void axpy(double s, const Tensor& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
  }

  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

  std::string shape_string() const {
    std::string s = "[";
    for (std::size_t m = 0; m < rank_; ++m) {
      if (m) s += ",";
      s += std::to_string(dims_[m]);
    }
    return s + "]";
  }

 private:
  void reset(std::span<const std::size_t> dims) {
    if (dims.size() == 0 || dims.size() > kMaxRank) {
      throw ShapeMismatch("tensor rank must be 1..4");
    }
    rank_ = dims.size();
    dims_.fill(1);
    std::copy(dims.begin(), dims.end(), dims_.begin());
    std::size_t s = 1;
    for (std::size_t m = rank_; m-- > 0;) {
      strides_[m] = s;
      s *= dims_[m];
    }
    data_.assign(s, 0.0);
  }

  void require_same(const Tensor& o) const {
    if (!same_shape(o)) {
      throw ShapeMismatch("tensor shapes differ: " + shape_string() + " vs " + o.shape_string());
    }
  }

  std::size_t rank_ = 0;
  std::array<std::size_t, kMaxRank> dims_{};
  std::array<std::size_t, kMaxRank> strides_{};
  std::vector<double> data_;
};

}  // namespace ccinterp
