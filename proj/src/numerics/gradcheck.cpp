// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dada/common/errors.hpp"
#include "dada/common/rng.hpp"

namespace dada {

namespace {

double evaluate(const LossFn& f, const BasicParamStore<double>& params) {
  Tape<double> tape(false);
  const Var loss = f(tape, params);
  const auto& v = tape.value(loss);
  if (v.size() != 1) throw ContractError("finite_diff_check: loss must be scalar");
  return v[0];
}

}  // namespace

GradCheckResult finite_diff_check(const LossFn& f, BasicParamStore<double> params,
                                  const GradCheckOptions& options) {
  if (!(options.eps > 0.0)) throw ArgumentError("finite_diff_check: eps must be positive");

  const double base = evaluate(f, params);
  if (evaluate(f, params) != base) {
    throw ContractError("finite_diff_check: loss function is not deterministic");
  }

  GradMap<double> analytic;
  {
    Tape<double> tape;
    const Var loss = f(tape, params);
    analytic = tape.backward(loss);
  }

  GradCheckResult result;
  Rng rng(options.seed);
  const double h = options.eps;
  for (const std::string& path : params.trainable_paths()) {
    const auto it = analytic.find(path);
    const std::size_t n = params.get(path).size();
    std::vector<std::size_t> coords(n);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (options.max_coords_per_tensor != 0 && n > options.max_coords_per_tensor) {
      rng.shuffle(std::span<std::size_t>(coords));
      coords.resize(options.max_coords_per_tensor);
      std::sort(coords.begin(), coords.end());
    }
    for (std::size_t i : coords) {
      double& w = params.mutable_value(path)[i];
      const double w0 = w;
      w = w0 + 2 * h;
      const double f_p2 = evaluate(f, params);
      w = w0 + h;
      const double f_p1 = evaluate(f, params);
      w = w0 - h;
      const double f_m1 = evaluate(f, params);
      w = w0 - 2 * h;
      const double f_m2 = evaluate(f, params);
      w = w0;
      const double numeric = (-f_p2 + 8 * f_p1 - 8 * f_m1 + f_m2) / (12 * h);
      const double a = it == analytic.end() ? 0.0 : it->second[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-6});
      const double rel = std::abs(a - numeric) / denom;
      ++result.coordinates;
      if (!(rel <= result.max_rel_error)) {
        if (std::isnan(rel) || rel > result.max_rel_error) {
          result.max_rel_error = std::isnan(rel) ? INFINITY : rel;
          result.worst_path = path;
          result.worst_index = i;
        }
      }
    }
  }
  // The probes must leave the loss where it started.
  if (evaluate(f, params) != base) {
    throw ContractError("finite_diff_check: loss function is not deterministic");
  }
  return result;
}

}  // namespace dada
