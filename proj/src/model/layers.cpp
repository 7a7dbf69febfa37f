// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/model/layers.hpp"

#include <cmath>

#include "dada/common/errors.hpp"
#include "dada/common/hash.hpp"
#include "dada/common/rng.hpp"

namespace dada::model {

namespace {

std::uint64_t stream_of(const std::string& path) {
  Fnv1a64 h;
  h.update(path);
  return h.digest();
}

// Each tensor gets its own generator derived from its path, so adding or
// removing unrelated parameters never shifts another tensor's values.
Tensor uniform(std::uint64_t seed, const std::string& path, Shape shape, double bound) {
  Rng rng(mix_seed(seed, stream_of(path)));
  Tensor t(std::move(shape));
  for (float& v : t.data()) v = static_cast<float>(rng.uniform(-bound, bound));
  return t;
}

Tensor filled(Shape shape, float value) {
  Tensor t(std::move(shape));
  for (float& v : t.data()) v = value;
  return t;
}

Tensor identity(int n) {
  Tensor t({n, n});
  for (int i = 0; i < n; ++i) t.at(i, i) = 1.0f;
  return t;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string layer_prefix(int layer) { return "backbone.layer" + std::to_string(layer) + "."; }

std::string adapter_prefix(const std::string& name) { return "adapter." + name + "."; }

std::map<std::string, Shape> backbone_shapes(const ModelConfig& c) {
  std::map<std::string, Shape> out;
  const int d = c.d_model;
  out["backbone.embed.token"] = {c.vocab_size, d};
  out["backbone.embed.position"] = {c.max_len, d};
  out["backbone.embed.ln.gamma"] = {d};
  out["backbone.embed.ln.beta"] = {d};
  for (int l = 0; l < c.n_layers; ++l) {
    const std::string p = layer_prefix(l);
    for (const char* w : {"wq", "wk", "wv", "wo"}) out[p + "attn." + w] = {d, d};
    for (const char* b : {"bq", "bk", "bv", "bo"}) out[p + "attn." + b] = {d};
    for (const char* ln : {"ln1", "ln2"}) {
      out[p + ln + ".gamma"] = {d};
      out[p + ln + ".beta"] = {d};
    }
    out[p + "ff.w1"] = {d, c.d_ff};
    out[p + "ff.b1"] = {c.d_ff};
    out[p + "ff.w2"] = {c.d_ff, d};
    out[p + "ff.b2"] = {d};
  }
  out["backbone.head.w"] = {d, c.n_classes};
  out["backbone.head.b"] = {c.n_classes};
  return out;
}

std::map<std::string, Shape> adapter_shapes(const ModelConfig& c, const std::string& name) {
  std::map<std::string, Shape> out;
  if (name == kNullAdapter) return out;
  if (name.empty() || name.find('.') != std::string::npos) {
    throw ArgumentError("invalid adapter name '" + name + "'");
  }
  for (int l = 0; l < c.n_layers; ++l) {
    const std::string p = adapter_prefix(name) + "layer" + std::to_string(l) + ".";
    out[p + "down.w"] = {c.d_model, c.adapter_bottleneck};
    out[p + "down.b"] = {c.adapter_bottleneck};
    out[p + "up.w"] = {c.adapter_bottleneck, c.d_model};
    out[p + "up.b"] = {c.d_model};
  }
  return out;
}

std::map<std::string, Shape> fusion_shapes(const ModelConfig& c) {
  std::map<std::string, Shape> out;
  for (int l = 0; l < c.n_layers; ++l) {
    const std::string p = "fusion.layer" + std::to_string(l) + ".";
    for (const char* m : {"query", "key", "value"}) out[p + m] = {c.d_model, c.d_model};
  }
  return out;
}

void init_backbone(ParamStore& store, const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  for (const auto& [path, shape] : backbone_shapes(config)) {
    if (path.rfind("backbone.embed.token", 0) == 0 || path.rfind("backbone.embed.position", 0) == 0) {
      store.add(path, uniform(seed, path, shape, 0.5));
    } else if (ends_with(path, ".gamma")) {
      store.add(path, filled(shape, 1.0f));
    } else if (shape.size() == 1) {
      store.add(path, Tensor(shape));
    } else {
      store.add(path, uniform(seed, path, shape, 1.0 / std::sqrt(static_cast<double>(shape[0]))));
    }
  }
}

void init_adapter(ParamStore& store, const ModelConfig& config, const std::string& name,
                  std::uint64_t seed) {
  config.validate();
  for (const auto& [path, shape] : adapter_shapes(config, name)) {
    if (ends_with(path, "down.w")) {
      store.add(path, uniform(seed, path, shape, 1.0 / std::sqrt(static_cast<double>(shape[0]))));
    } else {
      store.add(path, Tensor(shape));
    }
  }
}

void init_fusion(ParamStore& store, const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.d_model));
  for (const auto& [path, shape] : fusion_shapes(config)) {
    if (ends_with(path, ".value")) {
      store.add(path, identity(config.d_model));
    } else {
      store.add(path, uniform(seed, path, shape, bound));
    }
  }
}

template <class T>
Var adapter_block(Tape<T>& tape, Var h, Var down_w, Var down_b, Var up_w, Var up_b) {
  const Var down = ops::gelu(tape, ops::add_row(tape, ops::matmul(tape, h, down_w), down_b));
  const Var up = ops::add_row(tape, ops::matmul(tape, down, up_w), up_b);
  return ops::add(tape, h, up);
}

template <class T>
FusionVars<T> fusion_block(Tape<T>& tape, Var h, const std::vector<Var>& adapter_outputs, Var query,
                           Var key, Var value) {
  if (adapter_outputs.empty()) throw ContractError("fusion needs at least one adapter output");
  const Var u = ops::matmul_nt(tape, ops::matmul(tape, h, query), key);
  const Var scores = ops::softmax_rows(tape, ops::row_dots(tape, u, adapter_outputs));
  const Var mixed = ops::weighted_sum(tape, scores, adapter_outputs);
  return {ops::matmul(tape, mixed, value), scores};
}

template <class T>
AdapterParams<T> AdapterParams<T>::from_store(const BasicParamStore<T>& store, const std::string& name,
                                              int n_layers) {
  AdapterParams out;
  out.name = name;
  if (name == kNullAdapter) return out;
  for (int l = 0; l < n_layers; ++l) {
    const std::string p = adapter_prefix(name) + "layer" + std::to_string(l) + ".";
    out.layers.push_back({store.get(p + "down.w"), store.get(p + "down.b"), store.get(p + "up.w"),
                          store.get(p + "up.b")});
  }
  return out;
}

template <class T>
BasicTensor<T> adapter_forward(const AdapterParams<T>& adapter, int layer, const BasicTensor<T>& h) {
  if (adapter.is_null()) return h;
  if (layer < 0 || layer >= static_cast<int>(adapter.layers.size())) {
    throw ArgumentError("adapter_forward: layer " + std::to_string(layer) + " out of range");
  }
  const auto& p = adapter.layers[static_cast<std::size_t>(layer)];
  if (h.rank() != 2 || h.dim(1) != p.down_w.dim(0)) {
    throw ContractError("adapter_forward: input width does not match d_model " +
                        std::to_string(p.down_w.dim(0)));
  }
  Tape<T> tape(false);
  const Var out = adapter_block(tape, tape.constant(h), tape.constant(p.down_w),
                                tape.constant(p.down_b), tape.constant(p.up_w), tape.constant(p.up_b));
  return tape.value(out);
}

template <class T>
FusionLayerParams<T> FusionLayerParams<T>::from_store(const BasicParamStore<T>& store, int layer) {
  const std::string p = "fusion.layer" + std::to_string(layer) + ".";
  return {store.get(p + "query"), store.get(p + "key"), store.get(p + "value")};
}

template <class T>
FusionResult<T> fusion_forward(const FusionLayerParams<T>& fusion, const BasicTensor<T>& h,
                               const std::vector<BasicTensor<T>>& adapter_outputs) {
  if (adapter_outputs.empty()) throw ContractError("fusion_forward: no adapter outputs (N = 0)");
  Tape<T> tape(false);
  std::vector<Var> outputs;
  for (const auto& a : adapter_outputs) outputs.push_back(tape.constant(a));
  const auto vars = fusion_block(tape, tape.constant(h), outputs, tape.constant(fusion.query),
                                 tape.constant(fusion.key), tape.constant(fusion.value));
  return {tape.value(vars.output), tape.value(vars.scores)};
}

#define DADA_INSTANTIATE_LAYERS(T)                                                             \
  template Var adapter_block<T>(Tape<T>&, Var, Var, Var, Var, Var);                            \
  template FusionVars<T> fusion_block<T>(Tape<T>&, Var, const std::vector<Var>&, Var, Var, Var); \
  template struct AdapterParams<T>;                                                            \
  template BasicTensor<T> adapter_forward<T>(const AdapterParams<T>&, int, const BasicTensor<T>&); \
  template struct FusionLayerParams<T>;                                                        \
  template FusionResult<T> fusion_forward<T>(const FusionLayerParams<T>&, const BasicTensor<T>&, \
                                             const std::vector<BasicTensor<T>>&);

DADA_INSTANTIATE_LAYERS(float)
DADA_INSTANTIATE_LAYERS(double)

#undef DADA_INSTANTIATE_LAYERS

}  // namespace dada::model
