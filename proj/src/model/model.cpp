// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/model/model.hpp"

#include <cmath>

#include "dada/common/errors.hpp"
#include "dada/model/layers.hpp"

namespace dada::model {

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kBackbone:
      return "backbone";
    case Mode::kAdapter:
      return "backbone+adapter";
    case Mode::kFusion:
      return "fusion";
  }
  return "backbone";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::kBackbone, Mode::kAdapter, Mode::kFusion}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

void Architecture::validate() const {
  switch (mode) {
    case Mode::kBackbone:
      if (!adapters.empty()) throw ContractError("backbone mode takes no adapters");
      break;
    case Mode::kAdapter:
      if (adapters.size() != 1) throw ContractError("adapter mode takes exactly one adapter");
      break;
    case Mode::kFusion:
      if (adapters.empty()) throw ContractError("fusion mode needs at least one adapter (N = 0)");
      for (std::size_t i = 0; i < adapters.size(); ++i) {
        for (std::size_t j = i + 1; j < adapters.size(); ++j) {
          if (adapters[i] == adapters[j]) {
            throw ContractError("adapter '" + adapters[i] + "' appears twice in the bank");
          }
        }
      }
      break;
  }
}

Batch make_batch(const std::vector<std::span<const int>>& sequences, std::span<const int> labels,
                 int max_len) {
  if (!labels.empty() && labels.size() != sequences.size()) {
    throw ArgumentError("make_batch: labels do not match sequences");
  }
  Batch b;
  for (const auto& seq : sequences) {
    if (seq.empty()) throw ArgumentError("make_batch: empty sequence");
    if (static_cast<int>(seq.size()) > max_len) {
      throw LengthError("sequence of length " + std::to_string(seq.size()) + " exceeds max_len " +
                        std::to_string(max_len));
    }
    b.segments.push_back({static_cast<int>(b.ids.size()), static_cast<int>(seq.size())});
    for (std::size_t p = 0; p < seq.size(); ++p) {
      b.ids.push_back(seq[p]);
      b.positions.push_back(static_cast<int>(p));
    }
  }
  b.labels.assign(labels.begin(), labels.end());
  return b;
}

namespace {

template <class T>
Var linear(Tape<T>& tape, const BasicParamStore<T>& params, Var x, const std::string& w,
           const std::string& b) {
  return ops::add_row(tape, ops::matmul(tape, x, tape.param(params, w)), tape.param(params, b));
}

template <class T>
Var norm(Tape<T>& tape, const BasicParamStore<T>& params, Var x, const std::string& prefix) {
  return ops::layer_norm(tape, x, tape.param(params, prefix + "gamma"), tape.param(params, prefix + "beta"));
}

template <class T>
Var adapter_on_tape(Tape<T>& tape, const BasicParamStore<T>& params, const std::string& name, int layer,
                    Var h) {
  if (name == kNullAdapter) return h;
  const std::string p = adapter_prefix(name) + "layer" + std::to_string(layer) + ".";
  return adapter_block(tape, h, tape.param(params, p + "down.w"), tape.param(params, p + "down.b"),
                       tape.param(params, p + "up.w"), tape.param(params, p + "up.b"));
}

}  // namespace

template <class T>
ForwardVars<T> forward(Tape<T>& tape, const BasicParamStore<T>& params, const ModelConfig& config,
                       const Architecture& arch, const Batch& batch, const ForwardOptions& options) {
  arch.validate();
  if (batch.ids.empty()) throw ArgumentError("forward: empty batch");
  for (const auto& s : batch.segments) {
    if (s.length > config.max_len) {
      throw LengthError("sequence of length " + std::to_string(s.length) + " exceeds max_len " +
                        std::to_string(config.max_len));
    }
  }
  ForwardVars<T> out;
  const Var tok = ops::embedding(tape, tape.param(params, "backbone.embed.token"), batch.ids);
  const Var pos = ops::embedding(tape, tape.param(params, "backbone.embed.position"), batch.positions);
  Var x = norm(tape, params, ops::add(tape, tok, pos), "backbone.embed.ln.");

  for (int l = 0; l < config.n_layers; ++l) {
    const std::string p = layer_prefix(l);
    const Var q = linear(tape, params, x, p + "attn.wq", p + "attn.bq");
    const Var k = linear(tape, params, x, p + "attn.wk", p + "attn.bk");
    const Var v = linear(tape, params, x, p + "attn.wv", p + "attn.bv");
    const Var ctx = ops::segment_attention(tape, q, k, v, batch.segments, config.n_heads);
    const Var attn = linear(tape, params, ctx, p + "attn.wo", p + "attn.bo");
    const Var mid = norm(tape, params, ops::add(tape, x, attn), p + "ln1.");

    const Var inner = ops::gelu(tape, linear(tape, params, mid, p + "ff.w1", p + "ff.b1"));
    const Var h = linear(tape, params, inner, p + "ff.w2", p + "ff.b2");
    out.ff_outputs.push_back(h);

    Var z = h;
    if (arch.mode == Mode::kAdapter) {
      z = adapter_on_tape(tape, params, arch.adapters.front(), l, h);
    } else if (arch.mode == Mode::kFusion) {
      std::vector<Var> outputs;
      outputs.reserve(arch.adapters.size());
      for (const auto& name : arch.adapters) outputs.push_back(adapter_on_tape(tape, params, name, l, h));
      const std::string f = "fusion.layer" + std::to_string(l) + ".";
      if (options.forced_adapter) {
        const int n = static_cast<int>(outputs.size());
        const int pick = *options.forced_adapter;
        if (pick < 0 || pick >= n) throw ArgumentError("forced adapter index out of range");
        BasicTensor<T> onehot({tape.value(h).dim(0), n});
        for (int r = 0; r < onehot.dim(0); ++r) onehot.at(r, pick) = T(1);
        const Var scores = tape.constant(std::move(onehot));
        const Var mixed = ops::weighted_sum(tape, scores, outputs);
        z = ops::matmul(tape, mixed, tape.param(params, f + "value"));
        out.fusion_scores.push_back(scores);
      } else {
        const auto fused = fusion_block(tape, h, outputs, tape.param(params, f + "query"),
                                        tape.param(params, f + "key"), tape.param(params, f + "value"));
        z = fused.output;
        out.fusion_scores.push_back(fused.scores);
      }
    }
    x = norm(tape, params, ops::add(tape, mid, z), p + "ln2.");
  }
  const Var pooled = ops::segment_mean(tape, x, batch.segments);
  out.logits = linear(tape, params, pooled, "backbone.head.w", "backbone.head.b");
  return out;
}

BackboneOutput backbone_forward(const ParamStore& params, const ModelConfig& config,
                                std::span<const int> ids) {
  const Batch batch = make_batch({ids}, {}, config.max_len);
  Tape<float> tape(false);
  const auto vars = forward(tape, params, config, Architecture{}, batch);
  BackboneOutput out;
  out.logits = tape.value(vars.logits).reshaped({config.n_classes});
  for (Var h : vars.ff_outputs) out.ff_outputs.push_back(tape.value(h));
  return out;
}

template ForwardVars<float> forward<float>(Tape<float>&, const BasicParamStore<float>&,
                                           const ModelConfig&, const Architecture&, const Batch&,
                                           const ForwardOptions&);
template ForwardVars<double> forward<double>(Tape<double>&, const BasicParamStore<double>&,
                                             const ModelConfig&, const Architecture&, const Batch&,
                                             const ForwardOptions&);

}  // namespace dada::model
