// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel float kernels behind the tensor ops. Each kernel has a scalar
// reference implementation plus AVX2 (x86-64) or NEON (aarch64) variants; one
// table is chosen at startup from CPU features. Set DADA_ISA=scalar|avx2|neon
// to override the choice.
//
// Elementwise kernels (add, mul, scale, adam_update) are bit-identical across
// variants. Reductions (dot, sum) and axpy may differ in the last bits because
// of lane-wise partial sums and fused multiply-add.

#pragma once

#include <cstddef>
#include <string_view>

namespace dada::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct AdamCoefficients {
  float lr;
  float beta1;
  float beta2;
  float eps;
  float bias_correction1;  // 1 - beta1^t
  float bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  Isa isa;
  float (*dot)(const float* a, const float* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(float alpha, const float* x, float* y, std::size_t n);
  void (*add)(const float* a, const float* b, float* out, std::size_t n);
  void (*mul)(const float* a, const float* b, float* out, std::size_t n);
  void (*scale)(float alpha, float* x, std::size_t n);
  float (*sum)(const float* x, std::size_t n);
  float (*max)(const float* x, std::size_t n);
  void (*adam_update)(float* param, const float* grad, float* m, float* v,
                      std::size_t n, const AdamCoefficients& c);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

bool cpu_supports(Isa isa);

// Table used by tensor ops. Chosen once on first use.
const KernelTable& active();

// Switch the active table; throws ArgumentError if the ISA is unavailable.
// Not thread-safe; intended for tests and benchmarks.
void set_active(Isa isa);

}  // namespace dada::kernels
