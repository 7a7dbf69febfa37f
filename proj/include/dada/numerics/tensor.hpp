// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dada {

using Shape = std::vector<int>;

// Product of dimensions; throws ArgumentError on an empty shape or a
// non-positive dimension.
std::size_t shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

// Dense row-major tensor. The model runs on BasicTensor<float>; the double
// instantiation exists so gradient checks can evaluate in 64-bit.
template <class T>
class BasicTensor {
 public:
  using value_type = T;

  BasicTensor() = default;
  explicit BasicTensor(Shape shape);
  BasicTensor(Shape shape, std::vector<T> data);

  static BasicTensor scalar(T value) { return BasicTensor(Shape{1}, std::vector<T>{value}); }

  const Shape& shape() const noexcept { return shape_; }
  int rank() const noexcept { return static_cast<int>(shape_.size()); }
  int dim(int axis) const;
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  // Leading dimension and last dimension; a rank-1 tensor is one row.
  int rows() const noexcept { return rank() <= 1 ? 1 : shape_.front(); }
  int cols() const noexcept { return shape_.empty() ? 0 : shape_.back(); }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }
  const T* ptr() const noexcept { return data_.data(); }
  T* ptr() noexcept { return data_.data(); }

  T operator[](std::size_t i) const noexcept { return data_[i]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }

  T at(int row, int col) const noexcept { return data_[static_cast<std::size_t>(row) * cols() + col]; }
  T& at(int row, int col) noexcept { return data_[static_cast<std::size_t>(row) * cols() + col]; }

  std::span<const T> row(int r) const noexcept {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(r) * cols(), cols());
  }
  std::span<T> row(int r) noexcept {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(r) * cols(), cols());
  }

  template <class U>
  BasicTensor<U> cast() const {
    return BasicTensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  BasicTensor reshaped(Shape shape) const;

  bool all_finite() const noexcept;

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;

 private:
  Shape shape_;
  std::vector<T> data_;
};

using Tensor = BasicTensor<float>;

// Softmax along `axis`, computed with max-subtraction. Throws ArgumentError if
// the axis is out of range.
template <class T>
BasicTensor<T> softmax(const BasicTensor<T>& x, int axis);

// Byte-exact comparison (distinguishes -0.0 from 0.0 and NaN payloads).
template <class T>
bool bitwise_equal(const BasicTensor<T>& a, const BasicTensor<T>& b);

}  // namespace dada
