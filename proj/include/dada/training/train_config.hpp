// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "dada/common/key_value.hpp"

namespace dada::training {

enum class Stage { kBackbone, kAdapter, kFusion };

std::string_view stage_name(Stage stage);

// At most one of steps / epochs is positive; both zero means no updates.
struct TrainConfig {
  Stage stage = Stage::kBackbone;
  float lr = 1e-3f;
  int batch_size = 64;
  int steps = 0;
  int epochs = 0;
  std::uint64_t seed = 0;
  // Dev evaluation period in steps; 0 evaluates at the end of each epoch (or
  // only at the end for step-based runs). Step 0 is always evaluated.
  int eval_every = 0;

  // Scaled defaults: backbone 3 epochs at 1e-3, adapters 2000 steps at 3e-4,
  // fusion 5 epochs at 1e-3; batch 64 throughout.
  static TrainConfig defaults(Stage stage);

  // Defaults overridden by `<prefix>lr`, `<prefix>batch_size`, `<prefix>steps`,
  // `<prefix>epochs`, `<prefix>eval_every` and the global `seed`. Setting
  // steps clears the default epochs and vice versa; setting both is a
  // ConfigError.
  static TrainConfig from_config(const KeyValueConfig& config, Stage stage, std::string_view prefix);

  // Throws ConfigError.
  void validate() const;

  // Optimizer steps for a dataset of n examples.
  long long total_steps(std::size_t n) const;
};

}  // namespace dada::training
