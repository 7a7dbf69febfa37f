// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dada/common/errors.hpp"
#include "dada/common/rng.hpp"
#include "dada/numerics/adam.hpp"
#include "dada/numerics/kernels.hpp"
#include "dada/numerics/linalg.hpp"
#include "dada/numerics/param_store.hpp"
#include "dada/numerics/tensor.hpp"

namespace dada {
namespace {

std::vector<float> random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(rng.uniform(-1.0, 1.0));
  return v;
}

std::vector<const kernels::KernelTable*> simd_tables() {
  std::vector<const kernels::KernelTable*> out;
  if (kernels::cpu_supports(kernels::Isa::kAvx2) && kernels::avx2_table()) out.push_back(kernels::avx2_table());
  if (kernels::cpu_supports(kernels::Isa::kNeon) && kernels::neon_table()) out.push_back(kernels::neon_table());
  return out;
}

const std::size_t kLengths[] = {0, 1, 3, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1023};

TEST(Kernels, ReductionsMatchScalar) {
  const auto& ref = kernels::scalar_table();
  for (const auto* table : simd_tables()) {
    for (std::size_t n : kLengths) {
      const auto a = random_vector(n, 1 + n);
      const auto b = random_vector(n, 1000 + n);
      // 64-bit oracle bounds the accumulated rounding of either order.
      double exact = 0.0, abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        exact += static_cast<double>(a[i]) * b[i];
        abs_sum += std::abs(static_cast<double>(a[i]) * b[i]);
      }
      const double tol = 1e-6 * (abs_sum + 1.0);
      EXPECT_NEAR(table->dot(a.data(), b.data(), n), exact, tol) << kernels::isa_name(table->isa) << " n=" << n;
      EXPECT_NEAR(ref.dot(a.data(), b.data(), n), exact, tol);
      EXPECT_NEAR(table->sum(a.data(), n), ref.sum(a.data(), n), 1e-5 * (n + 1));
      if (n > 0) {
        EXPECT_EQ(table->max(a.data(), n), ref.max(a.data(), n));
      }
    }
  }
}

TEST(Kernels, ElementwiseMatchScalarExactly) {
  const auto& ref = kernels::scalar_table();
  for (const auto* table : simd_tables()) {
    for (std::size_t n : kLengths) {
      const auto a = random_vector(n, 7 + n);
      const auto b = random_vector(n, 70 + n);
      std::vector<float> x(n), y(n);
      ref.add(a.data(), b.data(), x.data(), n);
      table->add(a.data(), b.data(), y.data(), n);
      EXPECT_EQ(x, y);
      ref.mul(a.data(), b.data(), x.data(), n);
      table->mul(a.data(), b.data(), y.data(), n);
      EXPECT_EQ(x, y);
      x = a;
      y = a;
      ref.scale(0.37f, x.data(), n);
      table->scale(0.37f, y.data(), n);
      EXPECT_EQ(x, y);
      x = b;
      y = b;
      ref.axpy(-1.5f, a.data(), x.data(), n);
      table->axpy(-1.5f, a.data(), y.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], y[i], 1e-6f);
    }
  }
}

TEST(Kernels, AdamUpdateMatchesScalar) {
  const auto& ref = kernels::scalar_table();
  const kernels::AdamCoefficients c{1e-3f, 0.9f, 0.999f, 1e-8f, 1.0f - 0.9f * 0.9f, 1.0f - 0.999f * 0.999f};
  for (const auto* table : simd_tables()) {
    for (std::size_t n : kLengths) {
      auto p1 = random_vector(n, 3 + n), p2 = p1;
      const auto g = random_vector(n, 30 + n);
      auto m1 = random_vector(n, 300 + n), m2 = m1;
      std::vector<float> v1(n, 0.01f), v2 = v1;
      ref.adam_update(p1.data(), g.data(), m1.data(), v1.data(), n, c);
      table->adam_update(p2.data(), g.data(), m2.data(), v2.data(), n, c);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(p1[i], p2[i], 1e-6f);
        EXPECT_NEAR(m1[i], m2[i], 1e-6f);
        EXPECT_NEAR(v1[i], v2[i], 1e-6f);
      }
    }
  }
}

TEST(Kernels, ActiveTableCanBeForcedToScalar) {
  const auto before = kernels::active().isa;
  kernels::set_active(kernels::Isa::kScalar);
  EXPECT_EQ(kernels::active().isa, kernels::Isa::kScalar);
  kernels::set_active(before);
  if (!kernels::cpu_supports(kernels::Isa::kNeon)) {
    EXPECT_THROW(kernels::set_active(kernels::Isa::kNeon), ArgumentError);
  }
}

TEST(Linalg, GemmVariantsMatchDoubleOracle) {
  const int m = 5, k = 7, n = 3;
  const auto a = random_vector(m * k, 11);
  const auto b = random_vector(k * n, 12);
  std::vector<double> want(m * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < k; ++p) want[i * n + j] += static_cast<double>(a[i * k + p]) * b[p * n + j];

  std::vector<float> c(m * n, 0.0f);
  linalg::gemm_nn(a.data(), b.data(), c.data(), m, k, n);
  for (int i = 0; i < m * n; ++i) EXPECT_NEAR(c[i], want[i], 1e-5);

  std::vector<float> bt(n * k);  // b transposed, [n, k]
  for (int p = 0; p < k; ++p)
    for (int j = 0; j < n; ++j) bt[j * k + p] = b[p * n + j];
  std::fill(c.begin(), c.end(), 0.0f);
  linalg::gemm_nt(a.data(), bt.data(), c.data(), m, k, n);
  for (int i = 0; i < m * n; ++i) EXPECT_NEAR(c[i], want[i], 1e-5);

  // c[k, n] = a^T * d with d [m, n]
  const auto d = random_vector(m * n, 13);
  std::vector<double> want_tn(k * n, 0.0);
  for (int p = 0; p < k; ++p)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i) want_tn[p * n + j] += static_cast<double>(a[i * k + p]) * d[i * n + j];
  std::vector<float> ctn(k * n, 0.0f);
  linalg::gemm_tn(a.data(), d.data(), ctn.data(), m, k, n);
  for (int i = 0; i < k * n; ++i) EXPECT_NEAR(ctn[i], want_tn[i], 1e-5);
}

TEST(Tensor, ShapeChecks) {
  EXPECT_THROW(Tensor(Shape{}), ArgumentError);
  EXPECT_THROW(Tensor(Shape{2, 0}), ArgumentError);
  EXPECT_THROW(Tensor(Shape{2, 3}, std::vector<float>(5)), ArgumentError);
  const Tensor t(Shape{2, 3}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(t.at(1, 2), 6.0f);
  EXPECT_EQ(t.reshaped({3, 2}).at(2, 0), 5.0f);
  EXPECT_THROW(t.dim(2), ArgumentError);
}

TEST(Tensor, SoftmaxKnownValues) {
  const Tensor x(Shape{1, 3}, {1, 2, 3});
  const Tensor s = softmax(x, 1);
  EXPECT_NEAR(s[0], 0.09003057f, 1e-5f);
  EXPECT_NEAR(s[1], 0.24472847f, 1e-5f);
  EXPECT_NEAR(s[2], 0.66524096f, 1e-5f);
}

TEST(Tensor, SoftmaxIsShiftInvariantAndStable) {
  const Tensor big(Shape{1, 2}, {1000.0f, 1001.0f});
  const Tensor small(Shape{1, 2}, {0.0f, 1.0f});
  const Tensor a = softmax(big, 1), b = softmax(small, 1);
  EXPECT_TRUE(a.all_finite());
  EXPECT_NEAR(a[0], b[0], 1e-6f);
  EXPECT_NEAR(a[0] + a[1], 1.0f, 1e-6f);
}

TEST(ParamStore, HashTracksContentAndPrefix) {
  ParamStore s;
  s.add("a.w", Tensor(Shape{2}, {1, 2}));
  s.add("b.w", Tensor(Shape{2}, {3, 4}));
  const auto all = s.content_hash();
  const auto only_a = s.content_hash("a.");
  s.mutable_value("b.w")[0] = 5;
  EXPECT_NE(s.content_hash(), all);
  EXPECT_EQ(s.content_hash("a."), only_a);
  EXPECT_THROW(s.add("a.w", Tensor(Shape{1})), ContractError);
  EXPECT_THROW(s.get("missing"), ContractError);
  EXPECT_EQ(s.set_trainable_prefix("a.", false), 1u);
  EXPECT_EQ(s.trainable_paths(), std::vector<std::string>{"b.w"});
}

TEST(Adam, FirstStepMovesByLearningRate) {
  ParamStore s;
  s.add("w", Tensor(Shape{1}, {0.0f}));
  Adam adam(AdamConfig{0.1f});
  adam.step(s, GradMap<float>{{"w", Tensor(Shape{1}, {1.0f})}});
  EXPECT_NEAR(s.get("w")[0], -0.1f, 1e-6f);
  EXPECT_EQ(adam.steps_taken(), 1);
}

TEST(Adam, StepSizeIsBoundedByLearningRateForConstantGradients) {
  ParamStore s;
  s.add("w", Tensor(Shape{3}, {0.0f, 0.0f, 0.0f}));
  Adam adam(AdamConfig{0.01f});
  for (int t = 0; t < 50; ++t) {
    adam.step(s, GradMap<float>{{"w", Tensor(Shape{3}, {1e-4f, -3.0f, 100.0f})}});
  }
  // Constant gradients: every step moves exactly lr against the sign.
  EXPECT_NEAR(s.get("w")[0], -0.5f, 1e-3f);
  EXPECT_NEAR(s.get("w")[1], 0.5f, 1e-4f);
  EXPECT_NEAR(s.get("w")[2], -0.5f, 1e-4f);
}

TEST(Adam, RejectsUnknownOrMisshapenGradients) {
  ParamStore s;
  s.add("w", Tensor(Shape{2}, {1.0f, 2.0f}));
  Adam adam(AdamConfig{0.1f});
  EXPECT_THROW(adam.step(s, GradMap<float>{{"v", Tensor(Shape{2})}}), ContractError);
  EXPECT_THROW(adam.step(s, GradMap<float>{{"w", Tensor(Shape{3})}}), ContractError);
  EXPECT_EQ(s.get("w")[0], 1.0f);
}

TEST(Adam, FrozenParametersDoNotMove) {
  ParamStore s;
  s.add("w", Tensor(Shape{1}, {1.0f}), false);
  Adam adam(AdamConfig{0.1f});
  adam.step(s, GradMap<float>{{"w", Tensor(Shape{1}, {1.0f})}});
  EXPECT_EQ(s.get("w")[0], 1.0f);
}

}  // namespace
}  // namespace dada
