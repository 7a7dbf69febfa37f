// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dada/common/errors.hpp"

namespace dada {

std::size_t shape_size(const Shape& shape) {
  if (shape.empty()) throw ArgumentError("tensor shape must have at least one dimension");
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw ArgumentError("tensor dimensions must be positive, got " + shape_string(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template <class T>
BasicTensor<T>::BasicTensor(Shape shape) : shape_(std::move(shape)), data_(shape_size(shape_), T{0}) {}

template <class T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_size(shape_) != data_.size()) {
    throw ArgumentError("tensor data length " + std::to_string(data_.size()) +
                        " does not match shape " + shape_string(shape_));
  }
}

template <class T>
int BasicTensor<T>::dim(int axis) const {
  if (axis < 0 || axis >= rank()) {
    throw ArgumentError("axis " + std::to_string(axis) + " out of range for rank " +
                        std::to_string(rank()));
  }
  return shape_[static_cast<std::size_t>(axis)];
}

template <class T>
BasicTensor<T> BasicTensor<T>::reshaped(Shape shape) const {
  return BasicTensor(std::move(shape), data_);
}

template <class T>
bool BasicTensor<T>::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
}

template <class T>
BasicTensor<T> softmax(const BasicTensor<T>& x, int axis) {
  if (axis < 0 || axis >= x.rank()) {
    throw ArgumentError("softmax axis " + std::to_string(axis) + " out of range for rank " +
                        std::to_string(x.rank()));
  }
  const auto& shape = x.shape();
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (int i = 0; i < axis; ++i) outer *= static_cast<std::size_t>(shape[i]);
  for (int i = axis + 1; i < x.rank(); ++i) inner *= static_cast<std::size_t>(shape[i]);
  const auto n = static_cast<std::size_t>(shape[static_cast<std::size_t>(axis)]);

  BasicTensor<T> out(shape);
  const T* in = x.ptr();
  T* o = out.ptr();
  for (std::size_t a = 0; a < outer; ++a) {
    for (std::size_t b = 0; b < inner; ++b) {
      const std::size_t base = a * n * inner + b;
      T m = in[base];
      for (std::size_t k = 1; k < n; ++k) m = std::max(m, in[base + k * inner]);
      T total = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const T e = std::exp(in[base + k * inner] - m);
        o[base + k * inner] = e;
        total += e;
      }
      for (std::size_t k = 0; k < n; ++k) o[base + k * inner] /= total;
    }
  }
  return out;
}

template <class T>
bool bitwise_equal(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  return a.shape() == b.shape() &&
         std::memcmp(a.ptr(), b.ptr(), a.size() * sizeof(T)) == 0;
}

template class BasicTensor<float>;
template class BasicTensor<double>;
template BasicTensor<float> softmax(const BasicTensor<float>&, int);
template BasicTensor<double> softmax(const BasicTensor<double>&, int);
template bool bitwise_equal(const BasicTensor<float>&, const BasicTensor<float>&);
template bool bitwise_equal(const BasicTensor<double>&, const BasicTensor<double>&);

}  // namespace dada
