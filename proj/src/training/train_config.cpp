// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/training/train_config.hpp"

#include "dada/common/errors.hpp"

namespace dada::training {

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kBackbone:
      return "backbone";
    case Stage::kAdapter:
      return "adapter";
    case Stage::kFusion:
      return "fusion";
  }
  return "backbone";
}

TrainConfig TrainConfig::defaults(Stage stage) {
  TrainConfig c;
  c.stage = stage;
  switch (stage) {
    case Stage::kBackbone:
      c.lr = 1e-3f;
      c.epochs = 3;
      break;
    case Stage::kAdapter:
      c.lr = 3e-4f;
      c.steps = 2000;
      c.eval_every = 200;
      break;
    case Stage::kFusion:
      c.lr = 1e-3f;
      c.epochs = 5;
      break;
  }
  return c;
}

TrainConfig TrainConfig::from_config(const KeyValueConfig& config, Stage stage,
                                     std::string_view prefix) {
  TrainConfig c = defaults(stage);
  const std::string p(prefix);
  c.lr = static_cast<float>(config.get_double(p + "lr", c.lr));
  c.batch_size = static_cast<int>(config.get_int(p + "batch_size", c.batch_size));
  c.eval_every = static_cast<int>(config.get_int(p + "eval_every", c.eval_every));
  c.seed = static_cast<std::uint64_t>(config.get_int("seed", static_cast<std::int64_t>(c.seed)));
  const bool has_steps = config.contains(p + "steps");
  const bool has_epochs = config.contains(p + "epochs");
  if (has_steps && has_epochs) {
    throw ConfigError("set only one of " + p + "steps and " + p + "epochs");
  }
  if (has_steps) {
    c.steps = static_cast<int>(config.get_int(p + "steps", 0));
    c.epochs = 0;
  }
  if (has_epochs) {
    c.epochs = static_cast<int>(config.get_int(p + "epochs", 0));
    c.steps = 0;
  }
  c.validate();
  return c;
}

void TrainConfig::validate() const {
  if (!(lr >= 0.0f)) throw ConfigError("learning rate must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (steps < 0 || epochs < 0) throw ConfigError("steps and epochs must be >= 0");
  // Both zero is a valid zero-step run that returns the initialisation.
  if (steps > 0 && epochs > 0) throw ConfigError("set only one of steps and epochs");
  if (eval_every < 0) throw ConfigError("eval_every must be >= 0");
}

long long TrainConfig::total_steps(std::size_t n) const {
  if (steps > 0) return steps;
  const long long per_epoch = (static_cast<long long>(n) + batch_size - 1) / batch_size;
  return per_epoch * epochs;
}

}  // namespace dada::training
