// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end experiment: corpus, backbone, one adapter per rule, fusion over
// the bank plus the null adapter, evaluation on SAE / Multi / every profile,
// and the utilization analysis on the AAVE test set.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dada/common/key_value.hpp"
#include "dada/grammar/corpus.hpp"
#include "dada/model/config.hpp"
#include "dada/rules/profiles.hpp"
#include "dada/training/train_config.hpp"

namespace dada::training {

struct PipelineConfig {
  std::uint64_t seed = 1;
  int n_train = 20000;
  int n_dev = 2000;
  int n_test = 2000;
  model::ModelConfig model;
  TrainConfig backbone = TrainConfig::defaults(Stage::kBackbone);
  TrainConfig adapter = TrainConfig::defaults(Stage::kAdapter);
  TrainConfig fusion = TrainConfig::defaults(Stage::kFusion);
  rules::ProfileTable profiles = rules::ProfileTable::defaults();
  std::string profiles_source = "builtin";
  std::string analysis_profile = "AAVE";
  // Dev set for adapter checkpoint selection: "rule" uses the rule's own
  // slice of the dev corpus, "multi" the Multi-transformed dev corpus.
  std::string adapter_selection = "rule";
  // Fusion training set: "super" is the Multi-transformed training corpus
  // (unchanged sentences included); "super+sae" also appends the untouched
  // SAE originals.
  std::string fusion_data = "super";

  // Keys: seed, corpus.{train,dev,test}, model.*, {backbone,adapter,fusion}.*,
  // adapter.selection, fusion.data, profiles (file, relative to `base_dir`),
  // analysis.profile. Unknown keys
  // are a ConfigError.
  static PipelineConfig from_config(const KeyValueConfig& config, const std::filesystem::path& base_dir = {});
  static model::ModelConfig model_from_config(const KeyValueConfig& config);

  // Flattened key=value view with every default filled in.
  std::map<std::string, std::string> resolved() const;
  void validate() const;
};

// Fixed layout of a pipeline run directory.
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path train_data() const { return root / "data" / "train.jsonl"; }
  std::filesystem::path dev_data() const { return root / "data" / "dev.jsonl"; }
  std::filesystem::path test_data() const { return root / "data" / "test.jsonl"; }
  std::filesystem::path backbone() const { return root / "checkpoints" / "backbone.ckpt"; }
  std::filesystem::path adapter(const std::string& rule) const {
    return root / "checkpoints" / "adapters" / (rule + ".ckpt");
  }
  std::filesystem::path fusion() const { return root / "checkpoints" / "fusion.ckpt"; }
  std::filesystem::path eval_csv() const { return root / "eval" / "accuracy.csv"; }
  std::filesystem::path traces() const { return root / "analysis" / "traces.jsonl"; }
  std::filesystem::path utilization_csv() const { return root / "analysis" / "utilization.csv"; }
  std::filesystem::path correlations_csv() const { return root / "analysis" / "correlations.csv"; }
  std::filesystem::path attribution_csv() const { return root / "analysis" / "attribution.csv"; }
};

struct EvalRow {
  std::string dataset;
  int n = 0;
  double backbone_accuracy = 0.0;
  double dada_accuracy = 0.0;
};

struct AttributionRow {
  std::string rule;
  double lower_offset = 0.0;
  int rank = 0;
};

struct PipelineResult {
  RunLayout layout;
  std::vector<EvalRow> evals;  // SAE, Multi, then profiles in table order
  std::vector<AttributionRow> attributions;
  std::vector<std::filesystem::path> outputs;

  const EvalRow& eval(const std::string& dataset) const;
};

// Trains every adapter in `rules` from the files already written under the
// layout (backbone checkpoint, train/dev corpora). Lets a caller farm the
// independent adapter runs out to other processes.
using AdapterLauncher = std::function<void(const std::vector<std::string>& rules, const RunLayout& layout)>;

struct PipelineOptions {
  std::ostream* progress = nullptr;
  AdapterLauncher launch_adapters;  // empty: train in-process, in rule order
};

// Fusion training set built from the SAE training corpus per
// config.fusion_data.
std::vector<grammar::TaggedSentence> fusion_training_set(const PipelineConfig& config,
                                                         const std::vector<grammar::TaggedSentence>& sae_train);

// The stage list a run would execute, one line each, for --dry-run.
std::vector<std::string> pipeline_plan(const PipelineConfig& config, const RunLayout& layout);

PipelineResult run_pipeline(const PipelineConfig& config, const RunLayout& layout,
                            const PipelineOptions& options = {});

// Adapter stage for a single rule, reading the corpora and backbone from the
// layout. Used by run_pipeline and by child processes.
void train_adapter_into(const PipelineConfig& config, const RunLayout& layout, const std::string& rule,
                        std::ostream* progress = nullptr);

}  // namespace dada::training
