// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace dada::model {

struct ModelConfig {
  int vocab_size = 0;
  int d_model = 64;
  int n_layers = 4;
  int n_heads = 4;
  int d_ff = 128;
  int max_len = 16;
  int n_classes = 3;
  int adapter_bottleneck = 16;

  // Throws ConfigError: non-positive sizes, d_model % n_heads != 0,
  // adapter_bottleneck >= d_model.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

std::string to_string(const ModelConfig& config);

}  // namespace dada::model
