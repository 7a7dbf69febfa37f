// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "dada/numerics/tape.hpp"

namespace dada {

// Scalar loss built on a tape from the given parameters.
using LossFn = std::function<Var(Tape<double>&, const BasicParamStore<double>&)>;

struct GradCheckOptions {
  double eps = 1e-3;
  // Coordinates probed per tensor; 0 probes all of them. When limited, the
  // coordinates are drawn with `seed`.
  std::size_t max_coords_per_tensor = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_path;
  std::size_t worst_index = 0;
  std::size_t coordinates = 0;
};

// Compares tape gradients of every trainable parameter against central finite
// differences (five-point stencil, step eps). Relative error per coordinate is
// |a - n| / max(|a|, |n|, 1e-6). Runs in double precision. Throws
// ContractError when two evaluations at the same point disagree.
GradCheckResult finite_diff_check(const LossFn& f, BasicParamStore<double> params,
                                  const GradCheckOptions& options = {});

}  // namespace dada
