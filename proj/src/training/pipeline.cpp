// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/training/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "dada/analysis/analysis.hpp"
#include "dada/common/errors.hpp"
#include "dada/grammar/generator.hpp"
#include "dada/model/checkpoint.hpp"
#include "dada/rules/datasets.hpp"
#include "dada/rules/rules.hpp"
#include "dada/training/trainer.hpp"

namespace dada::training {

namespace fs = std::filesystem;

namespace {

void put_train(std::map<std::string, std::string>& out, const std::string& prefix, const TrainConfig& c) {
  out[prefix + "lr"] = std::to_string(c.lr);
  out[prefix + "batch_size"] = std::to_string(c.batch_size);
  out[prefix + "eval_every"] = std::to_string(c.eval_every);
  if (c.steps > 0) {
    out[prefix + "steps"] = std::to_string(c.steps);
  } else {
    out[prefix + "epochs"] = std::to_string(c.epochs);
  }
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void log(std::ostream* out, const std::string& line) {
  if (out) *out << line << std::endl;
}

}  // namespace

model::ModelConfig PipelineConfig::model_from_config(const KeyValueConfig& kv) {
  model::ModelConfig m;
  m.vocab_size = model::Vocabulary::standard().size();
  auto get = [&](const char* key, int fallback) {
    return static_cast<int>(kv.get_int(std::string("model.") + key, fallback));
  };
  m.d_model = get("d_model", m.d_model);
  m.n_layers = get("n_layers", m.n_layers);
  m.n_heads = get("n_heads", m.n_heads);
  m.d_ff = get("d_ff", m.d_ff);
  m.max_len = get("max_len", m.max_len);
  m.adapter_bottleneck = get("adapter_bottleneck", m.adapter_bottleneck);
  return m;
}

PipelineConfig PipelineConfig::from_config(const KeyValueConfig& kv, const fs::path& base_dir) {
  std::vector<std::string_view> known = {"seed", "corpus.train", "corpus.dev", "corpus.test", "profiles",
                                         "analysis.profile", "adapter.selection", "fusion.data", "model.d_model", "model.n_layers",
                                         "model.n_heads", "model.d_ff", "model.max_len",
                                         "model.adapter_bottleneck"};
  static const std::vector<std::string> stage_keys = [] {
    std::vector<std::string> keys;
    for (const char* stage : {"backbone.", "adapter.", "fusion."}) {
      for (const char* key : {"lr", "batch_size", "steps", "epochs", "eval_every"}) {
        keys.push_back(std::string(stage) + key);
      }
    }
    return keys;
  }();
  for (const auto& k : kv.entries()) {
    const bool ok = std::find(known.begin(), known.end(), k.first) != known.end() ||
                    std::find(stage_keys.begin(), stage_keys.end(), k.first) != stage_keys.end();
    if (!ok) throw ConfigError("unknown config key '" + k.first + "'");
  }

  PipelineConfig c;
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<std::int64_t>(c.seed)));
  c.n_train = static_cast<int>(kv.get_int("corpus.train", c.n_train));
  c.n_dev = static_cast<int>(kv.get_int("corpus.dev", c.n_dev));
  c.n_test = static_cast<int>(kv.get_int("corpus.test", c.n_test));
  c.model = model_from_config(kv);
  c.backbone = TrainConfig::from_config(kv, Stage::kBackbone, "backbone.");
  c.adapter = TrainConfig::from_config(kv, Stage::kAdapter, "adapter.");
  c.fusion = TrainConfig::from_config(kv, Stage::kFusion, "fusion.");
  if (const auto file = kv.get("profiles")) {
    const fs::path path = fs::path(*file).is_absolute() ? fs::path(*file) : base_dir / *file;
    c.profiles = rules::ProfileTable::load(path);
    c.profiles_source = path.string();
  }
  c.analysis_profile = kv.get_string("analysis.profile", c.analysis_profile);
  c.adapter_selection = kv.get_string("adapter.selection", c.adapter_selection);
  c.fusion_data = kv.get_string("fusion.data", c.fusion_data);
  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  if (n_train < 1 || n_dev < 1 || n_test < 1) throw ConfigError("corpus sizes must be >= 1");
  model::ModelConfig m = model;
  if (m.vocab_size == 0) m.vocab_size = model::Vocabulary::standard().size();
  m.validate();
  backbone.validate();
  adapter.validate();
  fusion.validate();
  if (!profiles.contains(analysis_profile)) {
    throw ConfigError("analysis.profile '" + analysis_profile + "' is not a known profile");
  }
  if (adapter_selection != "rule" && adapter_selection != "multi") {
    throw ConfigError("adapter.selection must be 'rule' or 'multi', got '" + adapter_selection + "'");
  }
  if (fusion_data != "super" && fusion_data != "super+sae") {
    throw ConfigError("fusion.data must be 'super' or 'super+sae', got '" + fusion_data + "'");
  }
}

std::map<std::string, std::string> PipelineConfig::resolved() const {
  std::map<std::string, std::string> out;
  out["seed"] = std::to_string(seed);
  out["corpus.train"] = std::to_string(n_train);
  out["corpus.dev"] = std::to_string(n_dev);
  out["corpus.test"] = std::to_string(n_test);
  out["model.d_model"] = std::to_string(model.d_model);
  out["model.n_layers"] = std::to_string(model.n_layers);
  out["model.n_heads"] = std::to_string(model.n_heads);
  out["model.d_ff"] = std::to_string(model.d_ff);
  out["model.max_len"] = std::to_string(model.max_len);
  out["model.adapter_bottleneck"] = std::to_string(model.adapter_bottleneck);
  put_train(out, "backbone.", backbone);
  put_train(out, "adapter.", adapter);
  put_train(out, "fusion.", fusion);
  out["profiles"] = profiles_source;
  out["analysis.profile"] = analysis_profile;
  out["adapter.selection"] = adapter_selection;
  out["fusion.data"] = fusion_data;
  return out;
}

const EvalRow& PipelineResult::eval(const std::string& dataset) const {
  for (const auto& row : evals) {
    if (row.dataset == dataset) return row;
  }
  throw ArgumentError("no evaluation named '" + dataset + "'");
}

std::vector<TaggedSentence> fusion_training_set(const PipelineConfig& config,
                                               const std::vector<TaggedSentence>& sae_train) {
  auto out = rules::build_super_dataset(sae_train, config.seed).sentences;
  if (config.fusion_data == "super+sae") out.insert(out.end(), sae_train.begin(), sae_train.end());
  return out;
}

std::vector<std::string> pipeline_plan(const PipelineConfig& config, const RunLayout& layout) {
  std::vector<std::string> plan;
  plan.push_back("gen seed=" + std::to_string(config.seed) + " train=" + std::to_string(config.n_train) +
                 " dev=" + std::to_string(config.n_dev) + " test=" + std::to_string(config.n_test) + " -> " +
                 layout.train_data().parent_path().string());
  plan.push_back("train-backbone -> " + layout.backbone().string());
  for (const auto& rule : rules::rule_names()) {
    plan.push_back("train-adapter rule=" + rule + " -> " + layout.adapter(rule).string());
  }
  plan.push_back("train-fusion adapters=" + std::to_string(rules::rule_names().size()) + "+null data=" +
                 config.fusion_data + " -> " + layout.fusion().string());
  std::string datasets = "SAE,Multi";
  for (const auto& p : config.profiles.names()) datasets += "," + p;
  plan.push_back("eval datasets=" + datasets + " -> " + layout.eval_csv().string());
  plan.push_back("analyze profile=" + config.analysis_profile + " -> " + layout.correlations_csv().string());
  return plan;
}

void train_adapter_into(const PipelineConfig& config, const RunLayout& layout, const std::string& rule,
                        std::ostream* progress) {
  const auto backbone = model::load_checkpoint(layout.backbone());
  const auto train = grammar::read_jsonl(layout.train_data());
  const auto dev = grammar::read_jsonl(layout.dev_data());
  const auto data = rules::build_feature_dataset(rule, train, config.seed);
  const auto selection = config.adapter_selection == "multi" ? rules::build_super_dataset(dev, config.seed)
                                                             : rules::build_feature_dataset(rule, dev, config.seed);
  log(progress, "[adapter " + rule + "] " + std::to_string(data.sentences.size()) + " examples, selecting on " +
                    std::to_string(selection.sentences.size()) + " " + config.adapter_selection + " dev");
  auto result = train_adapter(backbone, rule, data.sentences, selection.sentences, config.adapter, {progress});
  fs::create_directories(layout.adapter(rule).parent_path());
  model::save_checkpoint(layout.adapter(rule), result.checkpoint);
}

PipelineResult run_pipeline(const PipelineConfig& config, const RunLayout& layout, const PipelineOptions& options) {
  config.validate();
  std::ostream* progress = options.progress;
  PipelineResult result;
  result.layout = layout;
  for (const auto& dir : {layout.train_data().parent_path(), layout.backbone().parent_path(),
                          layout.eval_csv().parent_path(), layout.traces().parent_path()}) {
    fs::create_directories(dir);
  }

  const auto corpus = grammar::generate_corpus(config.seed, config.n_train, config.n_dev, config.n_test);
  grammar::write_jsonl(layout.train_data(), corpus.train.sentences);
  grammar::write_jsonl(layout.dev_data(), corpus.dev.sentences);
  grammar::write_jsonl(layout.test_data(), corpus.test.sentences);
  result.outputs = {layout.train_data(), layout.dev_data(), layout.test_data()};

  model::ModelConfig model_config = config.model;
  auto backbone =
      train_backbone(corpus.train.sentences, corpus.dev.sentences, model_config, config.backbone, {progress})
          .checkpoint;
  model::save_checkpoint(layout.backbone(), backbone);
  result.outputs.push_back(layout.backbone());

  const auto& names = rules::rule_names();
  if (options.launch_adapters) {
    options.launch_adapters(names, layout);
  } else {
    for (const auto& rule : names) train_adapter_into(config, layout, rule, progress);
  }
  std::vector<model::Checkpoint> bank;
  for (const auto& rule : names) {
    bank.push_back(model::load_checkpoint(layout.adapter(rule)));
    result.outputs.push_back(layout.adapter(rule));
  }

  const auto fusion_train = fusion_training_set(config, corpus.train.sentences);
  const auto multi_dev = rules::build_super_dataset(corpus.dev.sentences, config.seed);
  log(progress, "[fusion] " + std::to_string(fusion_train.size()) + " examples (" + config.fusion_data + ")");
  auto fusion =
      train_fusion(backbone, bank, fusion_train, multi_dev.sentences, config.fusion, true, {progress}).checkpoint;
  model::save_checkpoint(layout.fusion(), fusion);
  result.outputs.push_back(layout.fusion());

  auto add_eval = [&](const std::string& name, const std::vector<grammar::TaggedSentence>& data) {
    EvalRow row;
    row.dataset = name;
    row.n = static_cast<int>(data.size());
    row.backbone_accuracy = evaluate(backbone, data, name).accuracy;
    row.dada_accuracy = evaluate(fusion, data, name).accuracy;
    log(progress, "[eval] " + name + " backbone " + fixed(row.backbone_accuracy) + " dada " +
                      fixed(row.dada_accuracy));
    result.evals.push_back(row);
  };
  add_eval("SAE", corpus.test.sentences);
  add_eval("Multi", rules::build_super_dataset(corpus.test.sentences, config.seed).sentences);
  for (const auto& name : config.profiles.names()) {
    add_eval(name,
             rules::build_profile_dataset(config.profiles.get(name), corpus.test.sentences, config.seed).sentences);
  }
  {
    std::ofstream out(layout.eval_csv(), std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + layout.eval_csv().string());
    out << "dataset,n,backbone_accuracy,dada_accuracy\n";
    for (const auto& row : result.evals) {
      out << row.dataset << ',' << row.n << ',' << fixed(row.backbone_accuracy) << ','
          << fixed(row.dada_accuracy) << '\n';
    }
  }
  result.outputs.push_back(layout.eval_csv());

  const auto analysis_set =
      rules::build_profile_dataset(config.profiles.get(config.analysis_profile), corpus.test.sentences, config.seed)
          .sentences;
  const auto traces = analysis::trace_fusion(fusion, analysis_set);
  analysis::write_traces(layout.traces(), traces);
  std::vector<std::int64_t> ids;
  for (const auto& t : traces) ids.push_back(t.id);
  const auto utilization = analysis::utilization_from_traces(traces, fusion.adapters, ids);
  analysis::write_utilization(utilization, layout.utilization_csv());
  std::vector<analysis::OffsetMatrix> offsets;
  for (const auto& rule : names) {
    try {
      offsets.push_back(analysis::offset_from_traces(traces, analysis_set, fusion.adapters, rule));
    } catch (const ConditioningError& e) {
      log(progress, std::string("[analyze] skipped: ") + e.what());
    }
  }
  analysis::export_correlations(offsets, layout.correlations_csv());
  {
    std::ofstream out(layout.attribution_csv(), std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + layout.attribution_csv().string());
    out << "rule,lower_layer_offset,rank\n";
    char number[64];
    for (const auto& m : offsets) {
      const auto a = analysis::attribute(m);
      result.attributions.push_back({a.rule, a.lower_offset, a.rank});
      std::snprintf(number, sizeof number, "%.9g", a.lower_offset);
      out << a.rule << ',' << number << ',' << a.rank << '\n';
    }
  }
  for (const auto& p : {layout.traces(), layout.utilization_csv(), layout.correlations_csv(),
                        layout.attribution_csv()}) {
    result.outputs.push_back(p);
  }
  return result;
}

}  // namespace dada::training
