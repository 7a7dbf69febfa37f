// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dada/common/errors.hpp"
#include "dada/numerics/linalg.hpp"

namespace dada::ops {

namespace {

template <class T>
void require_rank2(const BasicTensor<T>& t, const char* op) {
  if (t.rank() != 2) {
    throw ContractError(std::string(op) + ": expected a rank-2 tensor, got " +
                        shape_string(t.shape()));
  }
}

template <class T>
void require_same_shape(const BasicTensor<T>& a, const BasicTensor<T>& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ContractError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                        shape_string(b.shape()));
  }
}

void validate_segments(std::span<const Segment> segments, int rows, const char* op) {
  int expected = 0;
  for (const Segment& s : segments) {
    if (s.offset != expected || s.length <= 0) {
      throw ContractError(std::string(op) + ": segments must tile the rows in order");
    }
    expected += s.length;
  }
  if (expected != rows) {
    throw ContractError(std::string(op) + ": segments cover " + std::to_string(expected) +
                        " rows, tensor has " + std::to_string(rows));
  }
}

}  // namespace

template <class T>
Var matmul(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.value(a);
  const auto& bv = tape.value(b);
  require_rank2(av, "matmul");
  require_rank2(bv, "matmul");
  const int m = av.dim(0), k = av.dim(1), n = bv.dim(1);
  if (bv.dim(0) != k) {
    throw ContractError("matmul: inner dimensions differ " + shape_string(av.shape()) + " x " +
                        shape_string(bv.shape()));
  }
  BasicTensor<T> out({m, n});
  linalg::gemm_nn(av.ptr(), bv.ptr(), out.ptr(), m, k, n);
  return tape.record(std::move(out), {a, b}, [a, b, m, k, n](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    if (t.requires_grad(a)) linalg::gemm_nt(g.ptr(), t.value(b).ptr(), t.grad(a).ptr(), m, n, k);
    if (t.requires_grad(b)) linalg::gemm_tn(t.value(a).ptr(), g.ptr(), t.grad(b).ptr(), m, k, n);
  });
}

template <class T>
Var matmul_nt(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.value(a);
  const auto& bv = tape.value(b);
  require_rank2(av, "matmul_nt");
  require_rank2(bv, "matmul_nt");
  const int m = av.dim(0), k = av.dim(1), n = bv.dim(0);
  if (bv.dim(1) != k) {
    throw ContractError("matmul_nt: inner dimensions differ " + shape_string(av.shape()) +
                        " x " + shape_string(bv.shape()) + "^T");
  }
  BasicTensor<T> out({m, n});
  linalg::gemm_nt(av.ptr(), bv.ptr(), out.ptr(), m, k, n);
  return tape.record(std::move(out), {a, b}, [a, b, m, k, n](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    if (t.requires_grad(a)) linalg::gemm_nn(g.ptr(), t.value(b).ptr(), t.grad(a).ptr(), m, n, k);
    if (t.requires_grad(b)) linalg::gemm_tn(g.ptr(), t.value(a).ptr(), t.grad(b).ptr(), m, n, k);
  });
}

template <class T>
Var add(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.value(a);
  const auto& bv = tape.value(b);
  require_same_shape(av, bv, "add");
  BasicTensor<T> out(av.shape());
  linalg::add(av.ptr(), bv.ptr(), out.ptr(), out.size());
  return tape.record(std::move(out), {a, b}, [a, b](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    for (Var in : {a, b}) {
      if (!t.requires_grad(in)) continue;
      auto& gi = t.grad(in);
      linalg::add(gi.ptr(), g.ptr(), gi.ptr(), g.size());
    }
  });
}

template <class T>
Var add_row(Tape<T>& tape, Var x, Var bias) {
  const auto& xv = tape.value(x);
  const auto& bv = tape.value(bias);
  require_rank2(xv, "add_row");
  const int m = xv.dim(0), n = xv.dim(1);
  if (static_cast<int>(bv.size()) != n) {
    throw ContractError("add_row: bias of size " + std::to_string(bv.size()) +
                        " does not match width " + std::to_string(n));
  }
  BasicTensor<T> out(xv.shape());
  for (int r = 0; r < m; ++r) {
    linalg::add(xv.ptr() + static_cast<std::size_t>(r) * n, bv.ptr(),
                out.ptr() + static_cast<std::size_t>(r) * n, static_cast<std::size_t>(n));
  }
  return tape.record(std::move(out), {x, bias}, [x, bias, m, n](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    if (t.requires_grad(x)) {
      auto& gx = t.grad(x);
      linalg::add(gx.ptr(), g.ptr(), gx.ptr(), g.size());
    }
    if (t.requires_grad(bias)) {
      auto& gb = t.grad(bias);
      for (int r = 0; r < m; ++r) {
        linalg::add(gb.ptr(), g.ptr() + static_cast<std::size_t>(r) * n, gb.ptr(),
                    static_cast<std::size_t>(n));
      }
    }
  });
}

template <class T>
Var mul(Tape<T>& tape, Var a, Var b) {
  const auto& av = tape.value(a);
  const auto& bv = tape.value(b);
  require_same_shape(av, bv, "mul");
  BasicTensor<T> out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return tape.record(std::move(out), {a, b}, [a, b](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    if (t.requires_grad(a)) {
      auto& ga = t.grad(a);
      const auto& bv2 = t.value(b);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv2[i];
    }
    if (t.requires_grad(b)) {
      auto& gb = t.grad(b);
      const auto& av2 = t.value(a);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av2[i];
    }
  });
}

template <class T>
Var scale(Tape<T>& tape, Var x, T factor) {
  const auto& xv = tape.value(x);
  BasicTensor<T> out(xv.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * factor;
  return tape.record(std::move(out), {x}, [x, factor](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    linalg::axpy(factor, g.ptr(), t.grad(x).ptr(), g.size());
  });
}

template <class T>
Var gelu(Tape<T>& tape, Var x) {
  constexpr T kC = T(0.7978845608028654);  // sqrt(2/pi)
  constexpr T kA = T(0.044715);
  const auto& xv = tape.value(x);
  BasicTensor<T> out(xv.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const T v = xv[i];
    out[i] = T(0.5) * v * (T(1) + std::tanh(kC * (v + kA * v * v * v)));
  }
  return tape.record(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    const auto& xv2 = t.value(x);
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const T v = xv2[i];
      const T th = std::tanh(kC * (v + kA * v * v * v));
      const T d = T(0.5) * (T(1) + th) +
                  T(0.5) * v * (T(1) - th * th) * kC * (T(1) + T(3) * kA * v * v);
      gx[i] += g[i] * d;
    }
  });
}

template <class T>
Var layer_norm(Tape<T>& tape, Var x, Var gamma, Var beta, T eps) {
  const auto& xv = tape.value(x);
  const auto& gv = tape.value(gamma);
  const auto& bv = tape.value(beta);
  require_rank2(xv, "layer_norm");
  const int m = xv.dim(0), n = xv.dim(1);
  if (static_cast<int>(gv.size()) != n || static_cast<int>(bv.size()) != n) {
    throw ContractError("layer_norm: gamma/beta width does not match " + std::to_string(n));
  }
  BasicTensor<T> out(xv.shape());
  std::vector<T> xhat(xv.size());
  std::vector<T> rstd(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    const T* row = xv.ptr() + static_cast<std::size_t>(r) * n;
    T mean = 0;
    for (int c = 0; c < n; ++c) mean += row[c];
    mean /= T(n);
    T var = 0;
    for (int c = 0; c < n; ++c) var += (row[c] - mean) * (row[c] - mean);
    var /= T(n);
    const T rs = T(1) / std::sqrt(var + eps);
    rstd[static_cast<std::size_t>(r)] = rs;
    for (int c = 0; c < n; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * n + c;
      xhat[i] = (row[c] - mean) * rs;
      out[i] = xhat[i] * gv[static_cast<std::size_t>(c)] + bv[static_cast<std::size_t>(c)];
    }
  }
  return tape.record(
      std::move(out), {x, gamma, beta},
      [x, gamma, beta, m, n, xhat = std::move(xhat), rstd = std::move(rstd)](Tape<T>& t, Var self) {
        const auto& g = t.grad(self);
        if (t.requires_grad(gamma) || t.requires_grad(beta)) {
          std::vector<T> dgamma(static_cast<std::size_t>(n), T{0});
          std::vector<T> dbeta(static_cast<std::size_t>(n), T{0});
          for (int r = 0; r < m; ++r) {
            for (int c = 0; c < n; ++c) {
              const std::size_t i = static_cast<std::size_t>(r) * n + c;
              dgamma[static_cast<std::size_t>(c)] += g[i] * xhat[i];
              dbeta[static_cast<std::size_t>(c)] += g[i];
            }
          }
          if (t.requires_grad(gamma)) {
            auto& gg = t.grad(gamma);
            for (int c = 0; c < n; ++c) gg[static_cast<std::size_t>(c)] += dgamma[static_cast<std::size_t>(c)];
          }
          if (t.requires_grad(beta)) {
            auto& gb = t.grad(beta);
            for (int c = 0; c < n; ++c) gb[static_cast<std::size_t>(c)] += dbeta[static_cast<std::size_t>(c)];
          }
        }
        if (!t.requires_grad(x)) return;
        const auto& gv2 = t.value(gamma);
        auto& gx = t.grad(x);
        std::vector<T> dxhat(static_cast<std::size_t>(n));
        for (int r = 0; r < m; ++r) {
          T mean_d = 0;
          T mean_dx = 0;
          for (int c = 0; c < n; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * n + c;
            const T d = g[i] * gv2[static_cast<std::size_t>(c)];
            dxhat[static_cast<std::size_t>(c)] = d;
            mean_d += d;
            mean_dx += d * xhat[i];
          }
          mean_d /= T(n);
          mean_dx /= T(n);
          const T rs = rstd[static_cast<std::size_t>(r)];
          for (int c = 0; c < n; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * n + c;
            gx[i] += rs * (dxhat[static_cast<std::size_t>(c)] - mean_d - xhat[i] * mean_dx);
          }
        }
      });
}

template <class T>
Var softmax_rows(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  require_rank2(xv, "softmax_rows");
  BasicTensor<T> out = softmax(xv, 1);
  return tape.record(std::move(out), {x}, [x](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    const auto& y = t.value(self);
    auto& gx = t.grad(x);
    const int m = y.dim(0), n = y.dim(1);
    for (int r = 0; r < m; ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * n;
      T inner = 0;
      for (int c = 0; c < n; ++c) inner += g[base + c] * y[base + c];
      for (int c = 0; c < n; ++c) gx[base + c] += y[base + c] * (g[base + c] - inner);
    }
  });
}

template <class T>
Var embedding(Tape<T>& tape, Var table, std::span<const int> ids) {
  const auto& tv = tape.value(table);
  require_rank2(tv, "embedding");
  const int vocab = tv.dim(0), d = tv.dim(1);
  if (ids.empty()) throw ContractError("embedding: empty id list");
  BasicTensor<T> out({static_cast<int>(ids.size()), d});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const int id = ids[r];
    if (id < 0 || id >= vocab) {
      throw ArgumentError("embedding: id " + std::to_string(id) + " outside vocabulary of " +
                          std::to_string(vocab));
    }
    std::copy_n(tv.ptr() + static_cast<std::size_t>(id) * d, d, out.ptr() + r * d);
  }
  std::vector<int> id_copy(ids.begin(), ids.end());
  return tape.record(std::move(out), {table}, [table, d, id_copy = std::move(id_copy)](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    auto& gt = t.grad(table);
    for (std::size_t r = 0; r < id_copy.size(); ++r) {
      T* dst = gt.ptr() + static_cast<std::size_t>(id_copy[r]) * d;
      linalg::add(dst, g.ptr() + r * d, dst, static_cast<std::size_t>(d));
    }
  });
}

template <class T>
Var segment_attention(Tape<T>& tape, Var q, Var k, Var v, std::span<const Segment> segments,
                      int heads) {
  const auto& qv = tape.value(q);
  const auto& kv = tape.value(k);
  const auto& vv = tape.value(v);
  require_rank2(qv, "segment_attention");
  require_same_shape(qv, kv, "segment_attention");
  require_same_shape(qv, vv, "segment_attention");
  const int rows = qv.dim(0), d = qv.dim(1);
  if (heads <= 0 || d % heads != 0) {
    throw ContractError("segment_attention: width " + std::to_string(d) +
                        " not divisible by heads " + std::to_string(heads));
  }
  validate_segments(segments, rows, "segment_attention");
  const int dh = d / heads;
  const T inv_sqrt = T(1) / std::sqrt(T(dh));

  // probs holds, per segment and head, the L x L attention matrix.
  std::vector<T> probs;
  std::vector<std::size_t> prob_offsets;
  BasicTensor<T> out({rows, d});
  std::vector<T> scores;
  for (const Segment& s : segments) {
    const int len = s.length;
    for (int h = 0; h < heads; ++h) {
      prob_offsets.push_back(probs.size());
      scores.assign(static_cast<std::size_t>(len) * len, T{0});
      for (int i = 0; i < len; ++i) {
        const T* qi = qv.ptr() + static_cast<std::size_t>(s.offset + i) * d + h * dh;
        T mx = -std::numeric_limits<T>::infinity();
        for (int j = 0; j < len; ++j) {
          const T* kj = kv.ptr() + static_cast<std::size_t>(s.offset + j) * d + h * dh;
          const T sc = linalg::dot(qi, kj, static_cast<std::size_t>(dh)) * inv_sqrt;
          scores[static_cast<std::size_t>(i) * len + j] = sc;
          mx = std::max(mx, sc);
        }
        T total = 0;
        for (int j = 0; j < len; ++j) {
          T& e = scores[static_cast<std::size_t>(i) * len + j];
          e = std::exp(e - mx);
          total += e;
        }
        T* oi = out.ptr() + static_cast<std::size_t>(s.offset + i) * d + h * dh;
        for (int j = 0; j < len; ++j) {
          T& p = scores[static_cast<std::size_t>(i) * len + j];
          p /= total;
          linalg::axpy(p, vv.ptr() + static_cast<std::size_t>(s.offset + j) * d + h * dh, oi,
                       static_cast<std::size_t>(dh));
        }
      }
      probs.insert(probs.end(), scores.begin(), scores.end());
    }
  }

  std::vector<Segment> segs(segments.begin(), segments.end());
  return tape.record(
      std::move(out), {q, k, v},
      [q, k, v, heads, d, dh, inv_sqrt, segs = std::move(segs), probs = std::move(probs),
       prob_offsets = std::move(prob_offsets)](Tape<T>& t, Var self) {
        const auto& g = t.grad(self);
        const auto& qv2 = t.value(q);
        const auto& kv2 = t.value(k);
        const auto& vv2 = t.value(v);
        const bool need_q = t.requires_grad(q);
        const bool need_k = t.requires_grad(k);
        const bool need_v = t.requires_grad(v);
        T* gq = need_q ? t.grad(q).ptr() : nullptr;
        T* gk = need_k ? t.grad(k).ptr() : nullptr;
        T* gv = need_v ? t.grad(v).ptr() : nullptr;
        std::vector<T> dp;
        std::size_t block = 0;
        for (const Segment& s : segs) {
          const int len = s.length;
          for (int h = 0; h < heads; ++h, ++block) {
            const T* p = probs.data() + prob_offsets[block];
            dp.assign(static_cast<std::size_t>(len) * len, T{0});
            for (int i = 0; i < len; ++i) {
              const T* gi = g.ptr() + static_cast<std::size_t>(s.offset + i) * d + h * dh;
              for (int j = 0; j < len; ++j) {
                const std::size_t ij = static_cast<std::size_t>(i) * len + j;
                const T* vj = vv2.ptr() + static_cast<std::size_t>(s.offset + j) * d + h * dh;
                dp[ij] = linalg::dot(gi, vj, static_cast<std::size_t>(dh));
                if (need_v) {
                  linalg::axpy(p[ij], gi, gv + static_cast<std::size_t>(s.offset + j) * d + h * dh,
                               static_cast<std::size_t>(dh));
                }
              }
              T inner = 0;
              for (int j = 0; j < len; ++j) {
                inner += dp[static_cast<std::size_t>(i) * len + j] * p[static_cast<std::size_t>(i) * len + j];
              }
              // dp becomes the gradient w.r.t. the scaled scores.
              for (int j = 0; j < len; ++j) {
                const std::size_t ij = static_cast<std::size_t>(i) * len + j;
                dp[ij] = p[ij] * (dp[ij] - inner) * inv_sqrt;
              }
            }
            for (int i = 0; i < len; ++i) {
              const T* qi = qv2.ptr() + static_cast<std::size_t>(s.offset + i) * d + h * dh;
              for (int j = 0; j < len; ++j) {
                const T ds = dp[static_cast<std::size_t>(i) * len + j];
                const T* kj = kv2.ptr() + static_cast<std::size_t>(s.offset + j) * d + h * dh;
                if (need_q) {
                  linalg::axpy(ds, kj, gq + static_cast<std::size_t>(s.offset + i) * d + h * dh,
                               static_cast<std::size_t>(dh));
                }
                if (need_k) {
                  linalg::axpy(ds, qi, gk + static_cast<std::size_t>(s.offset + j) * d + h * dh,
                               static_cast<std::size_t>(dh));
                }
              }
            }
          }
        }
      });
}

template <class T>
Var segment_mean(Tape<T>& tape, Var x, std::span<const Segment> segments) {
  const auto& xv = tape.value(x);
  require_rank2(xv, "segment_mean");
  const int rows = xv.dim(0), d = xv.dim(1);
  validate_segments(segments, rows, "segment_mean");
  const int batch = static_cast<int>(segments.size());
  BasicTensor<T> out({batch, d});
  for (int b = 0; b < batch; ++b) {
    const Segment& s = segments[static_cast<std::size_t>(b)];
    T* o = out.ptr() + static_cast<std::size_t>(b) * d;
    for (int r = 0; r < s.length; ++r) {
      linalg::add(o, xv.ptr() + static_cast<std::size_t>(s.offset + r) * d, o,
                  static_cast<std::size_t>(d));
    }
    const T inv = T(1) / T(s.length);
    for (int c = 0; c < d; ++c) o[c] *= inv;
  }
  std::vector<Segment> segs(segments.begin(), segments.end());
  return tape.record(std::move(out), {x}, [x, d, segs = std::move(segs)](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    auto& gx = t.grad(x);
    for (std::size_t b = 0; b < segs.size(); ++b) {
      const T inv = T(1) / T(segs[b].length);
      for (int r = 0; r < segs[b].length; ++r) {
        linalg::axpy(inv, g.ptr() + b * d, gx.ptr() + static_cast<std::size_t>(segs[b].offset + r) * d,
                     static_cast<std::size_t>(d));
      }
    }
  });
}

template <class T>
Var cross_entropy(Tape<T>& tape, Var logits, std::span<const int> labels) {
  const auto& lv = tape.value(logits);
  require_rank2(lv, "cross_entropy");
  const int batch = lv.dim(0), classes = lv.dim(1);
  if (static_cast<int>(labels.size()) != batch) {
    throw ContractError("cross_entropy: " + std::to_string(labels.size()) + " labels for batch of " +
                        std::to_string(batch));
  }
  BasicTensor<T> probs = softmax(lv, 1);
  T loss = 0;
  for (int b = 0; b < batch; ++b) {
    const int y = labels[static_cast<std::size_t>(b)];
    if (y < 0 || y >= classes) throw ArgumentError("cross_entropy: label out of range");
    const T* row = lv.ptr() + static_cast<std::size_t>(b) * classes;
    T mx = row[0];
    for (int c = 1; c < classes; ++c) mx = std::max(mx, row[c]);
    T total = 0;
    for (int c = 0; c < classes; ++c) total += std::exp(row[c] - mx);
    loss += (std::log(total) + mx) - row[y];
  }
  loss /= T(batch);
  std::vector<int> ys(labels.begin(), labels.end());
  return tape.record(BasicTensor<T>::scalar(loss), {logits},
                     [logits, batch, classes, ys = std::move(ys), probs = std::move(probs)](Tape<T>& t, Var self) {
                       const T g0 = t.grad(self)[0] / T(batch);
                       auto& gl = t.grad(logits);
                       for (int b = 0; b < batch; ++b) {
                         for (int c = 0; c < classes; ++c) {
                           const std::size_t i = static_cast<std::size_t>(b) * classes + c;
                           const T target = c == ys[static_cast<std::size_t>(b)] ? T(1) : T(0);
                           gl[i] += g0 * (probs[i] - target);
                         }
                       }
                     });
}

template <class T>
Var sum(Tape<T>& tape, Var x) {
  const auto& xv = tape.value(x);
  T total = 0;
  for (T v : xv.data()) total += v;
  return tape.record(BasicTensor<T>::scalar(total), {x}, [x](Tape<T>& t, Var self) {
    const T g0 = t.grad(self)[0];
    auto& gx = t.grad(x);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g0;
  });
}

template <class T>
Var row_dots(Tape<T>& tape, Var u, const std::vector<Var>& items) {
  if (items.empty()) throw ContractError("row_dots: no items");
  const auto& uv = tape.value(u);
  require_rank2(uv, "row_dots");
  for (Var it : items) require_same_shape(uv, tape.value(it), "row_dots");
  const int rows = uv.dim(0), d = uv.dim(1), n = static_cast<int>(items.size());
  BasicTensor<T> out({rows, n});
  for (int i = 0; i < n; ++i) {
    const auto& av = tape.value(items[static_cast<std::size_t>(i)]);
    for (int r = 0; r < rows; ++r) {
      out.at(r, i) = linalg::dot(uv.ptr() + static_cast<std::size_t>(r) * d,
                                 av.ptr() + static_cast<std::size_t>(r) * d, static_cast<std::size_t>(d));
    }
  }
  std::vector<Var> inputs = items;
  inputs.push_back(u);
  return tape.record(std::move(out), inputs, [u, items, rows, d, n](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    for (int i = 0; i < n; ++i) {
      const Var item = items[static_cast<std::size_t>(i)];
      if (t.requires_grad(u)) {
        const T* av = t.value(item).ptr();
        T* gu = t.grad(u).ptr();
        for (int r = 0; r < rows; ++r) {
          linalg::axpy(g.at(r, i), av + static_cast<std::size_t>(r) * d, gu + static_cast<std::size_t>(r) * d,
                       static_cast<std::size_t>(d));
        }
      }
      if (t.requires_grad(item)) {
        const T* uv2 = t.value(u).ptr();
        T* ga = t.grad(item).ptr();
        for (int r = 0; r < rows; ++r) {
          linalg::axpy(g.at(r, i), uv2 + static_cast<std::size_t>(r) * d, ga + static_cast<std::size_t>(r) * d,
                       static_cast<std::size_t>(d));
        }
      }
    }
  });
}

template <class T>
Var weighted_sum(Tape<T>& tape, Var weights, const std::vector<Var>& items) {
  if (items.empty()) throw ContractError("weighted_sum: no items");
  const auto& wv = tape.value(weights);
  require_rank2(wv, "weighted_sum");
  const auto& first = tape.value(items.front());
  require_rank2(first, "weighted_sum");
  const int rows = first.dim(0), d = first.dim(1), n = static_cast<int>(items.size());
  if (wv.dim(0) != rows || wv.dim(1) != n) {
    throw ContractError("weighted_sum: weights " + shape_string(wv.shape()) + " do not match " +
                        std::to_string(n) + " items of " + shape_string(first.shape()));
  }
  for (Var it : items) require_same_shape(first, tape.value(it), "weighted_sum");
  BasicTensor<T> out({rows, d});
  for (int i = 0; i < n; ++i) {
    const auto& av = tape.value(items[static_cast<std::size_t>(i)]);
    for (int r = 0; r < rows; ++r) {
      linalg::axpy(wv.at(r, i), av.ptr() + static_cast<std::size_t>(r) * d, out.ptr() + static_cast<std::size_t>(r) * d,
                   static_cast<std::size_t>(d));
    }
  }
  std::vector<Var> inputs = items;
  inputs.push_back(weights);
  return tape.record(std::move(out), inputs, [weights, items, rows, d, n](Tape<T>& t, Var self) {
    const auto& g = t.grad(self);
    const bool need_w = t.requires_grad(weights);
    for (int i = 0; i < n; ++i) {
      const Var item = items[static_cast<std::size_t>(i)];
      if (need_w) {
        const T* av = t.value(item).ptr();
        auto& gw = t.grad(weights);
        for (int r = 0; r < rows; ++r) {
          gw.at(r, i) += linalg::dot(g.ptr() + static_cast<std::size_t>(r) * d,
                                     av + static_cast<std::size_t>(r) * d, static_cast<std::size_t>(d));
        }
      }
      if (t.requires_grad(item)) {
        const auto& wv2 = t.value(weights);
        T* ga = t.grad(item).ptr();
        for (int r = 0; r < rows; ++r) {
          linalg::axpy(wv2.at(r, i), g.ptr() + static_cast<std::size_t>(r) * d, ga + static_cast<std::size_t>(r) * d,
                       static_cast<std::size_t>(d));
        }
      }
    }
  });
}

#define DADA_INSTANTIATE_OPS(T)                                                               \
  template Var matmul<T>(Tape<T>&, Var, Var);                                                 \
  template Var matmul_nt<T>(Tape<T>&, Var, Var);                                              \
  template Var add<T>(Tape<T>&, Var, Var);                                                    \
  template Var add_row<T>(Tape<T>&, Var, Var);                                                \
  template Var mul<T>(Tape<T>&, Var, Var);                                                    \
  template Var scale<T>(Tape<T>&, Var, T);                                                    \
  template Var gelu<T>(Tape<T>&, Var);                                                        \
  template Var layer_norm<T>(Tape<T>&, Var, Var, Var, T);                                     \
  template Var softmax_rows<T>(Tape<T>&, Var);                                                \
  template Var embedding<T>(Tape<T>&, Var, std::span<const int>);                             \
  template Var segment_attention<T>(Tape<T>&, Var, Var, Var, std::span<const Segment>, int); \
  template Var segment_mean<T>(Tape<T>&, Var, std::span<const Segment>);                      \
  template Var cross_entropy<T>(Tape<T>&, Var, std::span<const int>);                         \
  template Var sum<T>(Tape<T>&, Var);                                                         \
  template Var row_dots<T>(Tape<T>&, Var, const std::vector<Var>&);                           \
  template Var weighted_sum<T>(Tape<T>&, Var, const std::vector<Var>&);

DADA_INSTANTIATE_OPS(float)
DADA_INSTANTIATE_OPS(double)

#undef DADA_INSTANTIATE_OPS

}  // namespace dada::ops
