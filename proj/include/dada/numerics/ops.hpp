// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// The closed set of differentiable ops the model is built from. All of them
// work on rank-2 [rows, cols] tensors unless noted; variable-length sequences
// are packed row-wise and described by Segments.

#pragma once

#include <span>
#include <vector>

#include "dada/numerics/tape.hpp"

namespace dada::ops {

// Rows [offset, offset + length) of a packed batch belong to one sequence.
struct Segment {
  int offset = 0;
  int length = 0;
};

// [m,k] x [k,n] -> [m,n]
template <class T>
Var matmul(Tape<T>& tape, Var a, Var b);

// [m,k] x [n,k]^T -> [m,n]
template <class T>
Var matmul_nt(Tape<T>& tape, Var a, Var b);

template <class T>
Var add(Tape<T>& tape, Var a, Var b);

// x[m,n] + bias[n] broadcast over rows.
template <class T>
Var add_row(Tape<T>& tape, Var x, Var bias);

template <class T>
Var mul(Tape<T>& tape, Var a, Var b);

template <class T>
Var scale(Tape<T>& tape, Var x, T factor);

// tanh approximation of GELU.
template <class T>
Var gelu(Tape<T>& tape, Var x);

// Normalises each row, then applies gamma[n] and beta[n].
template <class T>
Var layer_norm(Tape<T>& tape, Var x, Var gamma, Var beta, T eps = T(1e-5));

template <class T>
Var softmax_rows(Tape<T>& tape, Var x);

// Gathers rows of table[V,d]; ids must lie in [0, V).
template <class T>
Var embedding(Tape<T>& tape, Var table, std::span<const int> ids);

// Multi-head scaled dot-product self-attention inside each segment. q, k and
// v are already projected [R,d]; segments must tile [0, R) in order.
template <class T>
Var segment_attention(Tape<T>& tape, Var q, Var k, Var v, std::span<const Segment> segments,
                      int heads);

// Mean over the rows of each segment: [R,d] -> [B,d].
template <class T>
Var segment_mean(Tape<T>& tape, Var x, std::span<const Segment> segments);

// Mean cross-entropy of logits[B,C] against integer labels; returns [1].
template <class T>
Var cross_entropy(Tape<T>& tape, Var logits, std::span<const int> labels);

template <class T>
Var sum(Tape<T>& tape, Var x);

// out[r,i] = u[r,:] . items[i][r,:]  ->  [R,N]
template <class T>
Var row_dots(Tape<T>& tape, Var u, const std::vector<Var>& items);

// out[r,:] = sum_i weights[r,i] * items[i][r,:]  ->  [R,d]
template <class T>
Var weighted_sum(Tape<T>& tape, Var weights, const std::vector<Var>& items);

}  // namespace dada::ops
