// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Parameter layout, initialisation, and the adapter / fusion blocks.
//
// Paths:
//   backbone.embed.{token,position}, backbone.embed.ln.{gamma,beta}
//   backbone.layer<l>.attn.{wq,bq,wk,bk,wv,bv,wo,bo}
//   backbone.layer<l>.{ln1,ln2}.{gamma,beta}
//   backbone.layer<l>.ff.{w1,b1,w2,b2}
//   backbone.head.{w,b}
//   adapter.<name>.layer<l>.{down.w,down.b,up.w,up.b}
//   fusion.layer<l>.{query,key,value}

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dada/model/config.hpp"
#include "dada/numerics/ops.hpp"
#include "dada/numerics/param_store.hpp"

namespace dada::model {

// Name of the identity adapter. It owns no parameters.
inline const std::string kNullAdapter = "null";

std::string layer_prefix(int layer);
std::string adapter_prefix(const std::string& name);

std::map<std::string, Shape> backbone_shapes(const ModelConfig& config);
std::map<std::string, Shape> adapter_shapes(const ModelConfig& config, const std::string& name);
std::map<std::string, Shape> fusion_shapes(const ModelConfig& config);

// Random initialisation, a pure function of (config, seed, name).
// Linear weights ~ U(+-1/sqrt(fan_in)), embeddings ~ U(+-0.5), biases 0,
// layer-norm gain 1. Adapter up-projections start at zero so a fresh adapter
// is the identity; fusion V starts as the identity and Q, K ~ U(+-1/sqrt(d)).
void init_backbone(ParamStore& store, const ModelConfig& config, std::uint64_t seed);
void init_adapter(ParamStore& store, const ModelConfig& config, const std::string& name,
                  std::uint64_t seed);
void init_fusion(ParamStore& store, const ModelConfig& config, std::uint64_t seed);

// h + Up(gelu(Down(h))) on a tape.
template <class T>
Var adapter_block(Tape<T>& tape, Var h, Var down_w, Var down_b, Var up_w, Var up_b);

template <class T>
struct FusionVars {
  Var output;  // [R, d]
  Var scores;  // [R, N], rows on the simplex
};

// Per-position attention over adapter outputs:
//   score_i = softmax_i((h Q) . (a_i K)),  output = sum_i score_i (a_i V).
// Computed as u = h Q K^T, score_i = softmax(u . a_i), output = (sum_i score_i a_i) V,
// which is the same quantity with fewer matrix products.
template <class T>
FusionVars<T> fusion_block(Tape<T>& tape, Var h, const std::vector<Var>& adapter_outputs, Var query,
                           Var key, Var value);

// Value-level views for callers outside a training loop.

template <class T>
struct AdapterLayerParams {
  BasicTensor<T> down_w, down_b, up_w, up_b;
};

template <class T>
struct AdapterParams {
  std::string name;
  std::vector<AdapterLayerParams<T>> layers;  // empty for the null adapter

  bool is_null() const { return name == kNullAdapter; }
  static AdapterParams from_store(const BasicParamStore<T>& store, const std::string& name,
                                  int n_layers);
};

// Throws ContractError when h's width does not match the adapter.
template <class T>
BasicTensor<T> adapter_forward(const AdapterParams<T>& adapter, int layer, const BasicTensor<T>& h);

template <class T>
struct FusionLayerParams {
  BasicTensor<T> query, key, value;
  static FusionLayerParams from_store(const BasicParamStore<T>& store, int layer);
};

template <class T>
struct FusionResult {
  BasicTensor<T> output;
  BasicTensor<T> scores;
};

// Throws ContractError for an empty adapter list or mismatched widths.
template <class T>
FusionResult<T> fusion_forward(const FusionLayerParams<T>& fusion, const BasicTensor<T>& h,
                               const std::vector<BasicTensor<T>>& adapter_outputs);

}  // namespace dada::model
