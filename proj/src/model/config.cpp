// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/model/config.hpp"

#include "dada/common/errors.hpp"

namespace dada::model {

void ModelConfig::validate() const {
  const std::pair<const char*, int> sizes[] = {
      {"vocab_size", vocab_size}, {"d_model", d_model}, {"n_layers", n_layers},
      {"n_heads", n_heads},       {"d_ff", d_ff},       {"max_len", max_len},
      {"n_classes", n_classes},   {"adapter_bottleneck", adapter_bottleneck},
  };
  for (const auto& [name, value] : sizes) {
    if (value <= 0) throw ConfigError(std::string("model ") + name + " must be positive");
  }
  if (d_model % n_heads != 0) throw ConfigError("model d_model must be divisible by n_heads");
  if (adapter_bottleneck >= d_model) {
    throw ConfigError("model adapter_bottleneck must be smaller than d_model");
  }
}

std::string to_string(const ModelConfig& c) {
  return "vocab=" + std::to_string(c.vocab_size) + " d=" + std::to_string(c.d_model) +
         " layers=" + std::to_string(c.n_layers) + " heads=" + std::to_string(c.n_heads) +
         " ff=" + std::to_string(c.d_ff) + " max_len=" + std::to_string(c.max_len) +
         " classes=" + std::to_string(c.n_classes) +
         " bottleneck=" + std::to_string(c.adapter_bottleneck);
}

}  // namespace dada::model
