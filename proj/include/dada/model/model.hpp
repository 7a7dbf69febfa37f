// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Encoder classifier with post-norm layers:
//   x   = LN(tok[ids] + pos[positions])
//   m   = LN1(x + Attn(x))
//   h   = FF(m)                  feed-forward output, the adapter insertion point
//   z   = h | adapter(h) | fusion(h, adapters(h))
//   x'  = LN2(m + z)
//   logits = Head(mean over positions of the last x')

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dada/model/config.hpp"
#include "dada/numerics/ops.hpp"
#include "dada/numerics/param_store.hpp"

namespace dada::model {

enum class Mode { kBackbone, kAdapter, kFusion };

// "backbone", "backbone+adapter", "fusion"
std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct Architecture {
  Mode mode = Mode::kBackbone;
  // kAdapter: exactly one name. kFusion: the bank in order, "null" allowed.
  std::vector<std::string> adapters;

  // Throws ContractError when the adapter list does not fit the mode.
  void validate() const;
};

// Sentences packed row-wise without padding.
struct Batch {
  std::vector<int> ids;
  std::vector<int> positions;
  std::vector<ops::Segment> segments;
  std::vector<int> labels;  // may be empty for inference

  int size() const noexcept { return static_cast<int>(segments.size()); }
};

// Throws LengthError for a sequence longer than max_len (nothing is
// truncated) and ArgumentError for an empty sequence.
Batch make_batch(const std::vector<std::span<const int>>& sequences, std::span<const int> labels,
                 int max_len);

struct ForwardOptions {
  // Replaces every fusion layer's scores with a one-hot row on this bank
  // index. Diagnostic only.
  std::optional<int> forced_adapter;
};

template <class T>
struct ForwardVars {
  Var logits;                      // [B, n_classes]
  std::vector<Var> ff_outputs;     // h_l, [R, d] per layer
  std::vector<Var> fusion_scores;  // [R, N] per layer, fusion mode only
};

template <class T>
ForwardVars<T> forward(Tape<T>& tape, const BasicParamStore<T>& params, const ModelConfig& config,
                       const Architecture& arch, const Batch& batch,
                       const ForwardOptions& options = {});

struct BackboneOutput {
  Tensor logits;                // [n_classes]
  std::vector<Tensor> ff_outputs;  // [T, d] per layer
};

// Single-sequence backbone pass. Throws LengthError when ids exceed max_len
// and ArgumentError for ids outside the vocabulary.
BackboneOutput backbone_forward(const ParamStore& params, const ModelConfig& config,
                                std::span<const int> ids);

}  // namespace dada::model
