// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "dada/numerics/param_store.hpp"

namespace dada {

struct AdamConfig {
  float lr = 1e-3f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float eps = 1e-8f;
};

// Adam with bias correction. First and second moments are kept per path and
// survive across calls. Gradients for non-trainable paths are ignored, so
// frozen tensors stay byte-identical; trainable paths without a gradient are
// left alone for that step.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  // Applies update number `t` (t >= 1). Throws ContractError for unknown
  // paths, shape mismatches, or t < 1.
  void step(ParamStore& params, const GradMap<float>& grads, int t);
  // Same with an internal counter starting at 1.
  void step(ParamStore& params, const GradMap<float>& grads) { step(params, grads, ++t_); }

  int steps_taken() const noexcept { return t_; }
  const AdamConfig& config() const noexcept { return config_; }
  void set_lr(float lr) noexcept { config_.lr = lr; }

 private:
  struct Moments {
    Tensor m;
    Tensor v;
  };

  AdamConfig config_;
  int t_ = 0;
  std::map<std::string, Moments> moments_;
};

}  // namespace dada
