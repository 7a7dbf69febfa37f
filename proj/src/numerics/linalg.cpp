// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/linalg.hpp"

#include "dada/numerics/kernels.hpp"

namespace dada::linalg {

template <>
float dot<float>(const float* a, const float* b, std::size_t n) {
  return kernels::active().dot(a, b, n);
}

template <>
double dot<double>(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <>
void axpy<float>(float alpha, const float* x, float* y, std::size_t n) {
  kernels::active().axpy(alpha, x, y, n);
}

template <>
void axpy<double>(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <>
void add<float>(const float* a, const float* b, float* out, std::size_t n) {
  kernels::active().add(a, b, out, n);
}

template <>
void add<double>(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

template <class T>
void gemm_nn(const T* a, const T* b, T* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    T* crow = c + static_cast<std::size_t>(i) * n;
    const T* arow = a + static_cast<std::size_t>(i) * k;
    for (int p = 0; p < k; ++p) {
      const T av = arow[p];
      if (av == T{0}) continue;
      axpy<T>(av, b + static_cast<std::size_t>(p) * n, crow, static_cast<std::size_t>(n));
    }
  }
}

template <class T>
void gemm_nt(const T* a, const T* b, T* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const T* arow = a + static_cast<std::size_t>(i) * k;
    T* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      crow[j] += dot<T>(arow, b + static_cast<std::size_t>(j) * k, static_cast<std::size_t>(k));
    }
  }
}

template <class T>
void gemm_tn(const T* a, const T* b, T* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const T* arow = a + static_cast<std::size_t>(i) * k;
    const T* brow = b + static_cast<std::size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const T av = arow[p];
      if (av == T{0}) continue;
      axpy<T>(av, brow, c + static_cast<std::size_t>(p) * n, static_cast<std::size_t>(n));
    }
  }
}

template void gemm_nn<float>(const float*, const float*, float*, int, int, int);
template void gemm_nn<double>(const double*, const double*, double*, int, int, int);
template void gemm_nt<float>(const float*, const float*, float*, int, int, int);
template void gemm_nt<double>(const double*, const double*, double*, int, int, int);
template void gemm_tn<float>(const float*, const float*, float*, int, int, int);
template void gemm_tn<double>(const double*, const double*, double*, int, int, int);

}  // namespace dada::linalg
