// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "dada/grammar/corpus.hpp"
#include "dada/model/checkpoint.hpp"
#include "dada/training/train_config.hpp"

namespace dada::training {

using grammar::TaggedSentence;
using model::Checkpoint;

struct EvalReport {
  std::string dataset;
  double accuracy = 0.0;
  int n = 0;
  int correct = 0;
  // Indexed by label (POS, NEG, NEU).
  std::array<int, 3> gold{};
  std::array<int, 3> predicted{};
  std::array<int, 3> correct_by_class{};
};

struct EvalPoint {
  long long step = 0;
  double dev_accuracy = 0.0;
  double train_loss = 0.0;  // mean since the previous evaluation; 0 at step 0
};

struct TrainLog {
  std::vector<EvalPoint> evals;
  long long best_step = 0;
  double best_dev_accuracy = 0.0;
  long long steps_run = 0;
  // Hash of every non-trainable tensor before and after training.
  std::string frozen_hash_before;
  std::string frozen_hash_after;
};

struct TrainResult {
  Checkpoint checkpoint;
  TrainLog log;
};

struct TrainOptions {
  std::ostream* progress = nullptr;
};

// Predicted class per sentence. Throws DataError for tokens outside the
// checkpoint vocabulary and LengthError for overlong sentences.
std::vector<int> predict(const Checkpoint& checkpoint, const std::vector<TaggedSentence>& sentences);

// Throws DataError on an empty corpus.
EvalReport evaluate(const Checkpoint& checkpoint, const std::vector<TaggedSentence>& sentences,
                    const std::string& dataset = "");

// Stage 1: every backbone tensor trainable; best dev accuracy wins. Throws
// DataError when train or dev contains transformed sentences.
TrainResult train_backbone(const std::vector<TaggedSentence>& train,
                           const std::vector<TaggedSentence>& dev, const model::ModelConfig& config,
                           const TrainConfig& train_config, const TrainOptions& options = {});

// Stage 2: one bottleneck adapter on a rule's dataset, backbone frozen and
// audited. `dev` is the checkpoint selection set.
TrainResult train_adapter(const Checkpoint& backbone, const std::string& rule,
                          const std::vector<TaggedSentence>& data, const std::vector<TaggedSentence>& dev,
                          const TrainConfig& train_config, const TrainOptions& options = {});

// Stage 3: fusion over the given adapters plus the null adapter (appended last
// when include_null). Backbone and adapters frozen and audited. Throws
// CompositionError when an adapter was trained against another backbone or
// config.
TrainResult train_fusion(const Checkpoint& backbone, const std::vector<Checkpoint>& adapters,
                         const std::vector<TaggedSentence>& data, const std::vector<TaggedSentence>& dev,
                         const TrainConfig& train_config, bool include_null = true,
                         const TrainOptions& options = {});

// FNV-1a over path, shape and bytes of every non-trainable tensor.
std::string frozen_hash(const ParamStore& params);

}  // namespace dada::training
