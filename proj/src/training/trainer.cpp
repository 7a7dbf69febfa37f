// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/training/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "dada/common/errors.hpp"
#include "dada/common/hash.hpp"
#include "dada/common/rng.hpp"
#include "dada/model/layers.hpp"
#include "dada/numerics/adam.hpp"
#include "dada/rules/rules.hpp"

namespace dada::training {

namespace {

constexpr int kEvalBatch = 256;

struct Encoded {
  std::vector<std::vector<int>> ids;
  std::vector<int> labels;
};

Encoded encode(const model::Vocabulary& vocab, const std::vector<TaggedSentence>& sentences,
               int max_len) {
  Encoded out;
  out.ids.reserve(sentences.size());
  for (const auto& s : sentences) {
    auto ids = vocab.encode(s);
    if (static_cast<int>(ids.size()) > max_len) {
      throw LengthError("sentence " + std::to_string(s.id) + " has " + std::to_string(ids.size()) +
                        " tokens, max_len is " + std::to_string(max_len));
    }
    out.ids.push_back(std::move(ids));
    out.labels.push_back(grammar::label_index(s.label));
  }
  return out;
}

model::Batch gather(const Encoded& data, std::span<const std::size_t> rows, int max_len) {
  std::vector<std::span<const int>> seqs;
  std::vector<int> labels;
  seqs.reserve(rows.size());
  for (std::size_t r : rows) {
    seqs.emplace_back(data.ids[r]);
    labels.push_back(data.labels[r]);
  }
  return model::make_batch(seqs, labels, max_len);
}

std::vector<int> predict_encoded(const Checkpoint& ck, const Encoded& data) {
  std::vector<int> out;
  out.reserve(data.ids.size());
  const auto arch = ck.architecture();
  std::vector<std::size_t> rows;
  for (std::size_t begin = 0; begin < data.ids.size(); begin += kEvalBatch) {
    const std::size_t end = std::min(data.ids.size(), begin + kEvalBatch);
    rows.resize(end - begin);
    std::iota(rows.begin(), rows.end(), begin);
    const auto batch = gather(data, rows, ck.config.max_len);
    Tape<float> tape(false);
    const auto vars = model::forward(tape, ck.params, ck.config, arch, batch);
    const Tensor& logits = tape.value(vars.logits);
    if (!logits.all_finite()) throw NumericError("non-finite logits during evaluation");
    for (int b = 0; b < batch.size(); ++b) {
      const auto row = logits.row(b);
      out.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
    }
  }
  return out;
}

EvalReport report_from(const std::string& name, const Encoded& data, const std::vector<int>& predicted) {
  EvalReport r;
  r.dataset = name;
  r.n = static_cast<int>(data.labels.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int gold = data.labels[i];
    const int pred = predicted[i];
    ++r.gold[static_cast<std::size_t>(gold)];
    ++r.predicted[static_cast<std::size_t>(pred)];
    if (gold == pred) {
      ++r.correct;
      ++r.correct_by_class[static_cast<std::size_t>(gold)];
    }
  }
  r.accuracy = r.n == 0 ? 0.0 : static_cast<double>(r.correct) / r.n;
  return r;
}

std::uint64_t stage_stream(Stage stage, const std::string& name) {
  Fnv1a64 h;
  h.update(stage_name(stage));
  h.update(name);
  return h.digest();
}

// Shared optimisation loop. Trains the trainable tensors of `ck` and leaves
// the best-dev snapshot in place.
TrainLog run(Checkpoint& ck, const std::vector<TaggedSentence>& train,
             const std::vector<TaggedSentence>& dev, const TrainConfig& cfg, const std::string& tag,
             const TrainOptions& options) {
  cfg.validate();
  const Encoded train_data = encode(ck.vocab, train, ck.config.max_len);
  const Encoded dev_data = encode(ck.vocab, dev, ck.config.max_len);
  if (dev_data.ids.empty()) throw DataError("empty dev set");
  const auto arch = ck.architecture();

  TrainLog log;
  log.frozen_hash_before = frozen_hash(ck.params);
  const auto trainable = ck.params.trainable_paths();

  std::map<std::string, Tensor> best;
  auto snapshot = [&] {
    for (const auto& p : trainable) best[p] = ck.params.get(p);
  };
  double loss_sum = 0.0;
  long long loss_count = 0;
  auto evaluate_dev = [&](long long step) {
    const double acc = report_from("dev", dev_data, predict_encoded(ck, dev_data)).accuracy;
    const double mean_loss = loss_count ? loss_sum / static_cast<double>(loss_count) : 0.0;
    log.evals.push_back({step, acc, mean_loss});
    loss_sum = 0.0;
    loss_count = 0;
    // Ties go to the later checkpoint.
    if (log.evals.size() == 1 || acc >= log.best_dev_accuracy) {
      log.best_dev_accuracy = acc;
      log.best_step = step;
      snapshot();
    }
    if (options.progress) {
      *options.progress << "[" << tag << "] step " << step << " dev_acc " << acc << " loss "
                        << mean_loss << std::endl;
    }
  };

  evaluate_dev(0);
  const long long total = train_data.ids.empty() ? 0 : cfg.total_steps(train_data.ids.size());
  if (total > 0 && trainable.empty()) throw ContractError("nothing to train");

  Adam adam(AdamConfig{cfg.lr});
  Rng rng(mix_seed(cfg.seed, stage_stream(cfg.stage, tag)));
  std::vector<std::size_t> order(train_data.ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = order.size();
  const std::size_t n = order.size();
  const long long per_epoch = static_cast<long long>((n + cfg.batch_size - 1) / cfg.batch_size);

  for (long long step = 1; step <= total; ++step) {
    if (cursor >= n) {
      rng.shuffle(std::span<std::size_t>(order));
      cursor = 0;
    }
    const std::size_t end = std::min(n, cursor + static_cast<std::size_t>(cfg.batch_size));
    const auto batch = gather(train_data, std::span<const std::size_t>(order).subspan(cursor, end - cursor),
                              ck.config.max_len);
    cursor = end;

    Tape<float> tape;
    const auto vars = model::forward(tape, ck.params, ck.config, arch, batch);
    const Var loss = ops::cross_entropy(tape, vars.logits, batch.labels);
    const float loss_value = tape.value(loss)[0];
    if (!std::isfinite(loss_value)) {
      throw NumericError("[" + tag + "] non-finite loss at step " + std::to_string(step));
    }
    auto grads = tape.backward(loss);
    for (const auto& [path, g] : grads) {
      if (!g.all_finite()) {
        throw NumericError("[" + tag + "] non-finite gradient for " + path + " at step " +
                           std::to_string(step));
      }
    }
    adam.step(ck.params, grads);
    loss_sum += loss_value;
    ++loss_count;
    log.steps_run = step;

    const bool epoch_end = cfg.epochs > 0 && step % per_epoch == 0;
    const bool periodic = cfg.eval_every > 0 && step % cfg.eval_every == 0;
    if (epoch_end || periodic || step == total) evaluate_dev(step);
  }

  for (const auto& [path, value] : best) ck.params.mutable_value(path) = value;
  log.frozen_hash_after = frozen_hash(ck.params);
  if (log.frozen_hash_after != log.frozen_hash_before) {
    throw ContractError("[" + tag + "] freeze audit failed: frozen parameters changed");
  }
  return log;
}

void require_sae(const std::vector<TaggedSentence>& sentences, const char* what) {
  for (const auto& s : sentences) {
    if (!s.is_sae()) {
      throw DataError(std::string(what) + " must be SAE; sentence " + std::to_string(s.id) +
                      " carries applied rules");
    }
  }
}

}  // namespace

std::string frozen_hash(const ParamStore& params) {
  Fnv1a64 h;
  for (const auto& [path, e] : params.entries()) {
    if (e.trainable) continue;
    h.update(path);
    for (int d : e.value.shape()) h.update_value(d);
    h.update(std::as_bytes(e.value.data()));
  }
  return h.hex();
}

std::vector<int> predict(const Checkpoint& checkpoint, const std::vector<TaggedSentence>& sentences) {
  return predict_encoded(checkpoint, encode(checkpoint.vocab, sentences, checkpoint.config.max_len));
}

EvalReport evaluate(const Checkpoint& checkpoint, const std::vector<TaggedSentence>& sentences,
                    const std::string& dataset) {
  if (sentences.empty()) throw DataError("evaluate: empty corpus");
  const Encoded data = encode(checkpoint.vocab, sentences, checkpoint.config.max_len);
  return report_from(dataset, data, predict_encoded(checkpoint, data));
}

TrainResult train_backbone(const std::vector<TaggedSentence>& train,
                           const std::vector<TaggedSentence>& dev, const model::ModelConfig& config,
                           const TrainConfig& train_config, const TrainOptions& options) {
  require_sae(train, "backbone training data");
  require_sae(dev, "backbone dev data");
  if (train.empty()) throw DataError("backbone training data is empty");
  TrainResult result;
  result.checkpoint = model::initial_checkpoint(config, model::Vocabulary::standard(),
                                                model::Mode::kBackbone, {}, train_config.seed);
  result.checkpoint.params.set_all_trainable(true);
  result.log = run(result.checkpoint, train, dev, train_config, "backbone", options);
  result.checkpoint.params.set_all_trainable(false);
  result.checkpoint.lineage.backbone_hash = result.checkpoint.backbone_hash();
  return result;
}

TrainResult train_adapter(const Checkpoint& backbone, const std::string& rule,
                          const std::vector<TaggedSentence>& data, const std::vector<TaggedSentence>& dev,
                          const TrainConfig& train_config, const TrainOptions& options) {
  if (backbone.mode != model::Mode::kBackbone) {
    throw ModeError("train_adapter needs a backbone checkpoint, got " +
                    std::string(model::mode_name(backbone.mode)));
  }
  if (rule == model::kNullAdapter) throw ArgumentError("the null adapter has no parameters to train");
  if (!rules::is_rule_name(rule)) throw ConfigError("unknown rule '" + rule + "'");
  if (data.empty()) throw RuleStarvedError(rule);

  TrainResult result;
  Checkpoint& ck = result.checkpoint;
  ck.config = backbone.config;
  ck.vocab = backbone.vocab;
  ck.mode = model::Mode::kAdapter;
  ck.adapters = {rule};
  ck.meta = {{"rule", rule}};
  ck.params = backbone.params;
  ck.params.set_all_trainable(false);
  model::init_adapter(ck.params, ck.config, rule, mix_seed(train_config.seed, stage_stream(Stage::kAdapter, rule)));
  ck.lineage.backbone_hash = backbone.backbone_hash();
  result.log = run(ck, data, dev, train_config, "adapter:" + rule, options);
  if (ck.backbone_hash() != ck.lineage.backbone_hash) {
    throw ContractError("freeze audit failed: backbone changed during adapter training");
  }
  ck.params.set_all_trainable(false);
  ck.lineage.adapter_hashes = {{rule, ck.adapter_hash(rule)}};
  return result;
}

TrainResult train_fusion(const Checkpoint& backbone, const std::vector<Checkpoint>& adapters,
                         const std::vector<TaggedSentence>& data, const std::vector<TaggedSentence>& dev,
                         const TrainConfig& train_config, bool include_null,
                         const TrainOptions& options) {
  if (backbone.mode != model::Mode::kBackbone) {
    throw ModeError("train_fusion needs a backbone checkpoint, got " +
                    std::string(model::mode_name(backbone.mode)));
  }
  if (data.empty()) throw DataError("fusion training data is empty");
  const std::string backbone_hash = backbone.backbone_hash();

  TrainResult result;
  Checkpoint& ck = result.checkpoint;
  ck.config = backbone.config;
  ck.vocab = backbone.vocab;
  ck.mode = model::Mode::kFusion;
  ck.params = backbone.params;
  ck.lineage.backbone_hash = backbone_hash;
  for (const auto& a : adapters) {
    if (a.mode != model::Mode::kAdapter || a.adapters.size() != 1) {
      throw CompositionError("fusion inputs must be single-adapter checkpoints");
    }
    const std::string& name = a.adapters.front();
    if (!(a.config == backbone.config) || !(a.vocab == backbone.vocab)) {
      throw CompositionError("adapter '" + name + "' was trained with a different model config");
    }
    if (a.lineage.backbone_hash != backbone_hash || a.backbone_hash() != backbone_hash) {
      throw CompositionError("adapter '" + name + "' was trained against a different backbone");
    }
    if (std::find(ck.adapters.begin(), ck.adapters.end(), name) != ck.adapters.end()) {
      throw CompositionError("adapter '" + name + "' given twice");
    }
    ck.adapters.push_back(name);
    for (const auto& path : a.params.paths_with_prefix(model::adapter_prefix(name))) {
      ck.params.add(path, a.params.get(path), false);
    }
    ck.lineage.adapter_hashes[name] = a.adapter_hash(name);
  }
  if (include_null) ck.adapters.push_back(model::kNullAdapter);
  if (ck.adapters.empty()) throw ContractError("fusion needs at least one adapter (N = 0)");
  ck.params.set_all_trainable(false);
  model::init_fusion(ck.params, ck.config, mix_seed(train_config.seed, stage_stream(Stage::kFusion, "")));
  ck.params.set_trainable_prefix("fusion.", true);

  result.log = run(ck, data, dev, train_config, "fusion", options);
  if (ck.backbone_hash() != backbone_hash) {
    throw ContractError("freeze audit failed: backbone changed during fusion training");
  }
  for (const auto& [name, hash] : ck.lineage.adapter_hashes) {
    if (ck.adapter_hash(name) != hash) {
      throw ContractError("freeze audit failed: adapter '" + name + "' changed during fusion training");
    }
  }
  ck.params.set_all_trainable(false);
  return result;
}

}  // namespace dada::training
