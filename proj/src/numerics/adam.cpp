// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/adam.hpp"

#include <cmath>

#include "dada/common/errors.hpp"
#include "dada/numerics/kernels.hpp"

namespace dada {

void Adam::step(ParamStore& params, const GradMap<float>& grads, int t) {
  if (t < 1) throw ContractError("adam: step index must be >= 1, got " + std::to_string(t));
  // Validate everything before touching any tensor so a bad call is a no-op.
  for (const auto& [path, g] : grads) {
    if (!params.contains(path)) throw ContractError("adam: gradient for unknown path " + path);
    const Tensor& w = params.get(path);
    if (w.shape() != g.shape()) {
      throw ContractError("adam: gradient shape " + shape_string(g.shape()) + " does not match " +
                          path + " " + shape_string(w.shape()));
    }
  }
  const kernels::AdamCoefficients coeffs{
      config_.lr,
      config_.beta1,
      config_.beta2,
      config_.eps,
      static_cast<float>(1.0 - std::pow(static_cast<double>(config_.beta1), t)),
      static_cast<float>(1.0 - std::pow(static_cast<double>(config_.beta2), t)),
  };
  const auto& table = kernels::active();
  for (const auto& [path, g] : grads) {
    if (!params.trainable(path)) continue;
    Tensor& w = params.mutable_value(path);
    auto it = moments_.find(path);
    if (it == moments_.end()) {
      it = moments_.emplace(path, Moments{Tensor(w.shape()), Tensor(w.shape())}).first;
    }
    table.adam_update(w.ptr(), g.ptr(), it->second.m.ptr(), it->second.v.ptr(), w.size(), coeffs);
  }
}

}  // namespace dada
