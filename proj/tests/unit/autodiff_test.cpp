// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "dada/common/errors.hpp"
#include "dada/common/rng.hpp"
#include "dada/numerics/gradcheck.hpp"
#include "dada/numerics/ops.hpp"

namespace dada {
namespace {

using DTensor = BasicTensor<double>;
using DStore = BasicParamStore<double>;

DTensor random_tensor(Shape shape, Rng& rng, double scale = 1.0) {
  DTensor t(std::move(shape));
  for (auto& x : t.data()) x = rng.uniform(-scale, scale);
  return t;
}

// Contracts an output against a fixed random projection so every output
// coordinate reaches the scalar loss with a distinct weight.
Var project(Tape<double>& tape, Var y, std::uint64_t seed) {
  Rng rng(seed);
  const auto& v = tape.value(y);
  return ops::sum(tape, ops::mul(tape, y, tape.constant(random_tensor(v.shape(), rng))));
}

void expect_gradients_match(const LossFn& f, const DStore& params, double tol = 1e-6) {
  const auto r = finite_diff_check(f, params);
  EXPECT_LT(r.max_rel_error, tol) << "worst " << r.worst_path << "[" << r.worst_index << "]";
  EXPECT_GT(r.coordinates, 0u);
}

class OpGradients : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OpGradients, MatmulFamily) {
  Rng rng(GetParam());
  DStore p;
  p.add("a", random_tensor({3, 4}, rng));
  p.add("b", random_tensor({4, 2}, rng));
  p.add("c", random_tensor({5, 4}, rng));
  p.add("bias", random_tensor({2}, rng));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        Var ab = ops::matmul(t, t.param(s, "a"), t.param(s, "b"));
        Var act = ops::matmul_nt(t, t.param(s, "a"), t.param(s, "c"));
        Var y = ops::add_row(t, ab, t.param(s, "bias"));
        return ops::add(t, project(t, y, 1), project(t, act, 2));
      },
      p);
}

TEST_P(OpGradients, ElementwiseAndGelu) {
  Rng rng(GetParam());
  DStore p;
  p.add("x", random_tensor({3, 5}, rng, 2.0));
  p.add("y", random_tensor({3, 5}, rng));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        Var x = t.param(s, "x");
        Var z = ops::mul(t, ops::gelu(t, x), t.param(s, "y"));
        return project(t, ops::scale(t, z, 0.5), 3);
      },
      p);
}

TEST_P(OpGradients, LayerNormAndSoftmax) {
  Rng rng(GetParam());
  DStore p;
  p.add("x", random_tensor({4, 6}, rng, 2.0));
  p.add("g", random_tensor({6}, rng));
  p.add("b", random_tensor({6}, rng));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        Var n = ops::layer_norm(t, t.param(s, "x"), t.param(s, "g"), t.param(s, "b"));
        return project(t, ops::softmax_rows(t, n), 4);
      },
      p);
}

TEST_P(OpGradients, EmbeddingWithRepeatedIds) {
  Rng rng(GetParam());
  DStore p;
  p.add("table", random_tensor({5, 3}, rng));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        const int ids[] = {4, 0, 4, 2};
        return project(t, ops::embedding(t, t.param(s, "table"), std::span<const int>(ids)), 5);
      },
      p);
}

TEST_P(OpGradients, SegmentAttentionAndMean) {
  Rng rng(GetParam());
  DStore p;
  p.add("q", random_tensor({5, 4}, rng));
  p.add("k", random_tensor({5, 4}, rng));
  p.add("v", random_tensor({5, 4}, rng));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        const ops::Segment segs[] = {{0, 2}, {2, 3}};
        Var a = ops::segment_attention(t, t.param(s, "q"), t.param(s, "k"), t.param(s, "v"),
                                       std::span<const ops::Segment>(segs), 2);
        Var m = ops::segment_mean(t, a, std::span<const ops::Segment>(segs));
        return ops::add(t, project(t, a, 6), project(t, m, 7));
      },
      p);
}

TEST_P(OpGradients, CrossEntropy) {
  Rng rng(GetParam());
  DStore p;
  p.add("logits", random_tensor({4, 3}, rng, 3.0));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        const int labels[] = {0, 2, 1, 2};
        return ops::cross_entropy(t, t.param(s, "logits"), std::span<const int>(labels));
      },
      p);
}

TEST_P(OpGradients, RowDotsAndWeightedSum) {
  Rng rng(GetParam());
  DStore p;
  p.add("u", random_tensor({3, 4}, rng));
  p.add("a0", random_tensor({3, 4}, rng));
  p.add("a1", random_tensor({3, 4}, rng));
  expect_gradients_match(
      [](Tape<double>& t, const DStore& s) {
        std::vector<Var> items = {t.param(s, "a0"), t.param(s, "a1")};
        Var w = ops::softmax_rows(t, ops::row_dots(t, t.param(s, "u"), items));
        return project(t, ops::weighted_sum(t, w, items), 8);
      },
      p);
}

INSTANTIATE_TEST_SUITE_P(Seeds, OpGradients, ::testing::Values(1u, 2u, 3u, 4u, 5u));

TEST(Tape, SharedParameterGradientsAccumulate) {
  DStore p;
  p.add("x", DTensor(Shape{2}, {1.5, -2.0}));
  Tape<double> t;
  Var a = t.param(p, "x");
  Var b = t.param(p, "x");
  EXPECT_EQ(a.id, b.id);
  const auto grads = t.backward(ops::sum(t, ops::mul(t, a, b)));
  EXPECT_DOUBLE_EQ(grads.at("x")[0], 3.0);
  EXPECT_DOUBLE_EQ(grads.at("x")[1], -4.0);
}

TEST(Tape, FrozenParametersGetNoGradient) {
  DStore p;
  p.add("x", DTensor(Shape{1}, {2.0}), false);
  p.add("y", DTensor(Shape{1}, {3.0}));
  Tape<double> t;
  const auto grads = t.backward(ops::sum(t, ops::mul(t, t.param(p, "x"), t.param(p, "y"))));
  EXPECT_EQ(grads.count("x"), 0u);
  EXPECT_DOUBLE_EQ(grads.at("y")[0], 2.0);
}

TEST(Tape, NonScalarLossIsRejected) {
  Tape<double> t;
  Var v = t.leaf(DTensor(Shape{2}, {1.0, 2.0}), true);
  EXPECT_THROW(t.backward(v), ContractError);
}

TEST(Tape, InferenceModeRecordsValuesOnly) {
  DStore p;
  p.add("x", DTensor(Shape{2}, {1.0, 2.0}));
  Tape<double> t(false);
  Var y = ops::scale(t, t.param(p, "x"), 3.0);
  EXPECT_DOUBLE_EQ(t.value(y)[1], 6.0);
  EXPECT_FALSE(t.requires_grad(y));
}

TEST(Ops, ShapeContractsAreChecked) {
  Tape<double> t;
  Var a = t.constant(DTensor(Shape{2, 3}));
  Var b = t.constant(DTensor(Shape{2, 3}));
  EXPECT_THROW(ops::matmul(t, a, b), ContractError);
  const ops::Segment gap[] = {{0, 1}, {2, 1}};
  EXPECT_THROW(ops::segment_mean(t, a, std::span<const ops::Segment>(gap)), ContractError);
  const int bad[] = {7};
  EXPECT_THROW(ops::embedding(t, a, std::span<const int>(bad)), ArgumentError);
}

TEST(Ops, SegmentAttentionDoesNotMixSegments) {
  Rng rng(9);
  Tape<double> t;
  const DTensor q = random_tensor({4, 2}, rng), k = random_tensor({4, 2}, rng);
  DTensor v = random_tensor({4, 2}, rng);
  const ops::Segment segs[] = {{0, 2}, {2, 2}};
  Var out1 = ops::segment_attention(t, t.constant(q), t.constant(k), t.constant(v),
                                    std::span<const ops::Segment>(segs), 1);
  v.at(3, 0) += 10.0;  // only touches the second segment
  Var out2 = ops::segment_attention(t, t.constant(q), t.constant(k), t.constant(v),
                                    std::span<const ops::Segment>(segs), 1);
  for (int c = 0; c < 2; ++c) {
    EXPECT_EQ(t.value(out1).at(0, c), t.value(out2).at(0, c));
    EXPECT_EQ(t.value(out1).at(1, c), t.value(out2).at(1, c));
  }
}

TEST(GradCheck, CatchesAWrongBackward) {
  DStore p;
  p.add("x", DTensor(Shape{3}, {0.3, -0.7, 1.1}));
  const LossFn wrong = [](Tape<double>& t, const DStore& s) {
    Var x = t.param(s, "x");
    DTensor y = t.value(x);
    for (auto& v : y.data()) v = v * v;
    // d(x^2)/dx is 2x; this backward claims 3x.
    Var sq = t.record(std::move(y), {x}, [x](Tape<double>& tape, Var self) {
      const auto& g = tape.grad(self);
      auto& gx = tape.grad(x);
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += 3.0 * tape.value(x)[i] * g[i];
    });
    return ops::sum(t, sq);
  };
  EXPECT_GT(finite_diff_check(wrong, p).max_rel_error, 0.1);
}

TEST(GradCheck, RejectsNondeterministicLoss) {
  DStore p;
  p.add("x", DTensor(Shape{1}, {1.0}));
  int calls = 0;
  const LossFn drifting = [&calls](Tape<double>& t, const DStore& s) {
    ++calls;
    return ops::sum(t, ops::scale(t, t.param(s, "x"), 1.0 + 1e-3 * calls));
  };
  EXPECT_THROW(finite_diff_check(drifting, p), ContractError);
}

}  // namespace
}  // namespace dada
