// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Raw row-major matrix helpers used by the tape ops. The float versions go
// through the active kernel table; the double versions are plain loops.
// All of them accumulate into `c`.

#pragma once

#include <cstddef>

namespace dada::linalg {

// c[m,n] += a[m,k] * b[k,n]
template <class T>
void gemm_nn(const T* a, const T* b, T* c, int m, int k, int n);

// c[m,n] += a[m,k] * b[n,k]^T
template <class T>
void gemm_nt(const T* a, const T* b, T* c, int m, int k, int n);

// c[k,n] += a[m,k]^T * b[m,n]
template <class T>
void gemm_tn(const T* a, const T* b, T* c, int m, int k, int n);

template <class T>
T dot(const T* a, const T* b, std::size_t n);

// y += alpha * x
template <class T>
void axpy(T alpha, const T* x, T* y, std::size_t n);

template <class T>
void add(const T* a, const T* b, T* out, std::size_t n);

}  // namespace dada::linalg
