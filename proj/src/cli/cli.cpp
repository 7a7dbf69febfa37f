// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/cli/cli.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>

#include "dada/analysis/analysis.hpp"
#include "dada/cli/manifest.hpp"
#include "dada/common/errors.hpp"
#include "dada/grammar/generator.hpp"
#include "dada/model/checkpoint.hpp"
#include "dada/rules/datasets.hpp"
#include "dada/rules/rules.hpp"
#include "dada/training/pipeline.hpp"
#include "dada/training/trainer.hpp"

extern char** environ;

namespace dada::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

// Relative output paths land under $DADA_RUN_DIR when it is set.
fs::path output_path(const std::string& path) {
  const fs::path p(path);
  const char* root = std::getenv("DADA_RUN_DIR");
  if (p.is_absolute() || root == nullptr || *root == '\0') return p;
  return fs::path(root) / p;
}

fs::path manifest_beside(const fs::path& file) {
  auto m = file;
  m += ".manifest.json";
  return m;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
};

training::PipelineConfig load_config(const Common& common) {
  training::PipelineConfig c;
  if (!common.config.empty()) {
    const fs::path path(common.config);
    c = training::PipelineConfig::from_config(KeyValueConfig::load(path), path.parent_path());
  }
  if (common.seed) {
    c.seed = *common.seed;
    c.backbone.seed = c.adapter.seed = c.fusion.seed = *common.seed;
  }
  return c;
}

rules::ProfileTable load_profiles(const std::string& file) {
  return file.empty() ? rules::ProfileTable::defaults() : rules::ProfileTable::load(file);
}

class Session {
 public:
  Session(std::string command, std::ostream& out) : out_(out), start_(Clock::now()) { manifest_.command = std::move(command); }

  RunManifest& manifest() { return manifest_; }

  void set_config(const std::map<std::string, std::string>& config, std::uint64_t seed) {
    manifest_.config = config;
    manifest_.seed = seed;
  }

  void finish(const fs::path& manifest_path) {
    manifest_.wall_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    write_manifest(manifest_path, manifest_);
    for (const auto& [path, hash] : manifest_.outputs) out_ << path << '\n';
    out_ << manifest_path.string() << '\n';
  }

 private:
  std::ostream& out_;
  Clock::time_point start_;
  RunManifest manifest_;
};

void print_plan(std::ostream& out, const std::string& command, const std::map<std::string, std::string>& config,
                const std::vector<std::string>& lines) {
  out << "dry run: " << command << '\n';
  for (const auto& [k, v] : config) out << "  " << k << " = " << v << '\n';
  for (const auto& line : lines) out << "  " << line << '\n';
}

void record_log(RunManifest& manifest, const training::TrainLog& log) {
  manifest.metrics["best_dev_accuracy"] = log.best_dev_accuracy;
  manifest.metrics["best_step"] = static_cast<double>(log.best_step);
  manifest.metrics["steps_run"] = static_cast<double>(log.steps_run);
}

std::string report_json(const training::EvalReport& r) {
  nlohmann::json j;
  j["dataset"] = r.dataset;
  j["n"] = r.n;
  j["correct"] = r.correct;
  j["accuracy"] = r.accuracy;
  for (int c = 0; c < grammar::kLabelCount; ++c) {
    const std::string name(grammar::label_name(static_cast<grammar::Label>(c)));
    j["per_class"][name] = {{"gold", r.gold[static_cast<std::size_t>(c)]},
                            {"predicted", r.predicted[static_cast<std::size_t>(c)]},
                            {"correct", r.correct_by_class[static_cast<std::size_t>(c)]}};
  }
  return j.dump();
}

// Runs `train-adapter` children, at most `jobs` at a time.
training::AdapterLauncher process_launcher(int jobs, const fs::path& config_file, std::ostream& err) {
  return [jobs, config_file, &err](const std::vector<std::string>& names, const training::RunLayout& layout) {
    const std::string self = fs::read_symlink("/proc/self/exe").string();
    std::vector<std::pair<pid_t, std::string>> running;
    std::vector<std::string> failed;
    auto reap_one = [&] {
      int status = 0;
      const pid_t pid = ::waitpid(-1, &status, 0);
      if (pid < 0) throw DataError("waitpid failed while waiting for adapter trainings");
      const auto it = std::find_if(running.begin(), running.end(), [&](const auto& r) { return r.first == pid; });
      if (it == running.end()) return;
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) failed.push_back(it->second);
      running.erase(it);
    };
    for (const auto& rule : names) {
      while (static_cast<int>(running.size()) >= jobs) reap_one();
      std::vector<std::string> args = {self,
                                       "train-adapter",
                                       "--config",
                                       config_file.string(),
                                       "--backbone",
                                       layout.backbone().string(),
                                       "--rule",
                                       rule,
                                       "--data",
                                       layout.train_data().string(),
                                       "--dev",
                                       layout.dev_data().string(),
                                       "--out",
                                       layout.adapter(rule).string()};
      std::vector<char*> argv;
      for (auto& a : args) argv.push_back(a.data());
      argv.push_back(nullptr);
      pid_t pid = 0;
      if (::posix_spawn(&pid, self.c_str(), nullptr, nullptr, argv.data(), environ) != 0) {
        throw DataError("cannot launch adapter training for rule '" + rule + "'");
      }
      err << "[pipeline] launched adapter " << rule << " (pid " << pid << ")\n";
      running.emplace_back(pid, rule);
    }
    while (!running.empty()) reap_one();
    if (!failed.empty()) {
      std::string list;
      for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
      throw DataError("adapter training failed for: " + list);
    }
  };
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dialect adapters with dynamic aggregation on a synthetic sentiment task", "dada"};
  app.require_subcommand(1);

  // gen
  std::uint64_t gen_seed = 1;
  int gen_train = 20000, gen_dev = 2000, gen_test = 2000;
  std::string gen_out;
  bool gen_dry = false;
  auto* gen = app.add_subcommand("gen", "Generate train/dev/test SAE corpora");
  gen->add_option("--seed", gen_seed, "Corpus seed");
  gen->add_option("--train", gen_train, "Training sentences")->check(CLI::PositiveNumber);
  gen->add_option("--dev", gen_dev, "Dev sentences")->check(CLI::PositiveNumber);
  gen->add_option("--test", gen_test, "Test sentences")->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_flag("--dry-run", gen_dry, "Print the plan and write nothing");

  // transform
  std::string tr_rule, tr_profile, tr_profiles, tr_data, tr_out;
  bool tr_multi = false, tr_changed = false, tr_dry = false;
  std::uint64_t tr_seed = 0;
  auto* transform = app.add_subcommand("transform", "Apply a rule or dialect profile to a corpus");
  auto* tr_rule_opt = transform->add_option("--rule", tr_rule, "Rule name");
  auto* tr_profile_opt = transform->add_option("--profile", tr_profile, "Profile name");
  auto* tr_multi_opt = transform->add_flag("--multi", tr_multi, "Apply every rule");
  tr_rule_opt->excludes(tr_profile_opt)->excludes(tr_multi_opt);
  tr_profile_opt->excludes(tr_multi_opt);
  transform->add_option("--profiles", tr_profiles, "Profile table file (default: built-in)");
  transform->add_option("--data", tr_data, "Input corpus (JSONL)")->required();
  transform->add_option("--out", tr_out, "Output corpus (JSONL)")->required();
  transform->add_option("--seed", tr_seed, "Rule seed");
  transform->add_flag("--changed-only", tr_changed, "Keep only sentences some rule changed");
  transform->add_flag("--dry-run", tr_dry, "Print the plan and write nothing");

  // train-backbone
  Common tb;
  std::string tb_data, tb_dev, tb_out;
  auto* train_backbone = app.add_subcommand("train-backbone", "Train the backbone on an SAE corpus");
  train_backbone->add_option("--config", tb.config, "key=value config file");
  train_backbone->add_option("--seed", tb.seed, "Override the config seed");
  train_backbone->add_option("--data", tb_data, "Training corpus")->required();
  train_backbone->add_option("--dev", tb_dev, "Dev corpus")->required();
  train_backbone->add_option("--out", tb_out, "Output checkpoint")->required();
  train_backbone->add_flag("--dry-run", tb.dry_run, "Print the plan and write nothing");

  // train-adapter
  Common ta;
  std::string ta_backbone, ta_rule, ta_data, ta_dev, ta_out;
  auto* train_adapter = app.add_subcommand(
      "train-adapter", "Train one rule adapter; --data/--dev are SAE corpora, the rule dataset is derived");
  train_adapter->add_option("--config", ta.config, "key=value config file");
  train_adapter->add_option("--seed", ta.seed, "Override the config seed");
  train_adapter->add_option("--backbone", ta_backbone, "Backbone checkpoint")->required();
  train_adapter->add_option("--rule", ta_rule, "Rule name")->required();
  train_adapter->add_option("--data", ta_data, "SAE training corpus")->required();
  train_adapter->add_option("--dev", ta_dev, "SAE dev corpus")->required();
  train_adapter->add_option("--out", ta_out, "Output checkpoint")->required();
  train_adapter->add_flag("--dry-run", ta.dry_run, "Print the plan and write nothing");

  // train-fusion
  Common tf;
  std::string tf_backbone, tf_adapters, tf_data, tf_dev, tf_out;
  bool tf_no_null = false;
  auto* train_fusion = app.add_subcommand(
      "train-fusion", "Train fusion over an adapter bank; --data/--dev are SAE corpora, Multi is derived");
  train_fusion->add_option("--config", tf.config, "key=value config file");
  train_fusion->add_option("--seed", tf.seed, "Override the config seed");
  train_fusion->add_option("--backbone", tf_backbone, "Backbone checkpoint")->required();
  train_fusion->add_option("--adapters", tf_adapters, "Directory of adapter checkpoints (*.ckpt)")
      ->required()
      ->check(CLI::ExistingDirectory);
  train_fusion->add_option("--data", tf_data, "SAE training corpus")->required();
  train_fusion->add_option("--dev", tf_dev, "SAE dev corpus")->required();
  train_fusion->add_option("--out", tf_out, "Output checkpoint")->required();
  train_fusion->add_flag("--no-null", tf_no_null, "Leave the null adapter out of the bank");
  train_fusion->add_flag("--dry-run", tf.dry_run, "Print the plan and write nothing");

  // eval
  std::string ev_ckpt, ev_data, ev_name, ev_profile, ev_profiles, ev_rule, ev_out;
  bool ev_multi = false;
  std::uint64_t ev_seed = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a corpus");
  eval->add_option("--ckpt", ev_ckpt, "Checkpoint")->required();
  eval->add_option("--data", ev_data, "Corpus (JSONL)")->required();
  eval->add_option("--name", ev_name, "Dataset name for the report");
  auto* ev_profile_opt = eval->add_option("--profile", ev_profile, "Transform the corpus with a profile first");
  auto* ev_rule_opt = eval->add_option("--rule", ev_rule, "Evaluate on the rule's changed sentences only");
  auto* ev_multi_opt = eval->add_flag("--multi", ev_multi, "Transform the corpus with every rule first");
  ev_profile_opt->excludes(ev_rule_opt)->excludes(ev_multi_opt);
  ev_rule_opt->excludes(ev_multi_opt);
  eval->add_option("--profiles", ev_profiles, "Profile table file (default: built-in)");
  eval->add_option("--seed", ev_seed, "Rule seed for transformations");
  eval->add_option("--out", ev_out, "Also write the report (JSON) here");

  // analyze
  std::string an_ckpt, an_data, an_rule, an_profile, an_profiles, an_out;
  std::uint64_t an_seed = 0;
  bool an_dry = false;
  auto* analyze = app.add_subcommand("analyze", "Fusion utilization and rule-conditioned offsets");
  analyze->add_option("--ckpt", an_ckpt, "Fusion checkpoint")->required();
  analyze->add_option("--data", an_data, "Transformed corpus (applied_rules populated)")->required();
  analyze->add_option("--rule", an_rule, "Only this rule's offsets");
  analyze->add_option("--profile", an_profile, "Transform an SAE corpus with this profile first");
  analyze->add_option("--profiles", an_profiles, "Profile table file (default: built-in)");
  analyze->add_option("--seed", an_seed, "Rule seed for --profile");
  analyze->add_option("--out", an_out, "Output directory")->required();
  analyze->add_flag("--dry-run", an_dry, "Print the plan and write nothing");

  // pipeline
  Common pl;
  std::string pl_out = "run";
  int pl_jobs = 1;
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  pipeline->add_option("--config", pl.config, "key=value config file")->required();
  pipeline->add_option("--seed", pl.seed, "Override the config seed");
  pipeline->add_option("--out", pl_out, "Run directory")->capture_default_str();
  pipeline->add_option("--jobs", pl_jobs, "Parallel adapter trainings")->check(CLI::PositiveNumber);
  pipeline->add_flag("--dry-run", pl.dry_run, "Print the plan and write nothing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const fs::path dir = output_path(gen_out);
      const std::vector<fs::path> files = {dir / "train.jsonl", dir / "dev.jsonl", dir / "test.jsonl"};
      const std::map<std::string, std::string> config = {{"seed", std::to_string(gen_seed)},
                                                         {"corpus.train", std::to_string(gen_train)},
                                                         {"corpus.dev", std::to_string(gen_dev)},
                                                         {"corpus.test", std::to_string(gen_test)}};
      if (gen_dry) {
        print_plan(out, "gen", config, {"write " + dir.string() + "/{train,dev,test}.jsonl"});
        return kExitOk;
      }
      Session session("gen", out);
      session.set_config(config, gen_seed);
      const auto corpus = grammar::generate_corpus(gen_seed, gen_train, gen_dev, gen_test);
      fs::create_directories(dir);
      grammar::write_jsonl(files[0], corpus.train.sentences);
      grammar::write_jsonl(files[1], corpus.dev.sentences);
      grammar::write_jsonl(files[2], corpus.test.sentences);
      for (const auto& f : files) session.manifest().add_output(f);
      session.finish(dir / "manifest.json");
      return kExitOk;
    }

    if (transform->parsed()) {
      if (tr_rule.empty() && tr_profile.empty() && !tr_multi) {
        err << "transform: one of --rule, --profile or --multi is required\n";
        return kExitUsage;
      }
      const fs::path dst = output_path(tr_out);
      std::map<std::string, std::string> config = {{"seed", std::to_string(tr_seed)},
                                                   {"changed_only", tr_changed ? "true" : "false"}};
      if (!tr_rule.empty()) config["rule"] = tr_rule;
      if (!tr_profile.empty()) config["profile"] = tr_profile;
      if (tr_multi) config["profile"] = "Multi";
      if (tr_dry) {
        print_plan(out, "transform", config, {"read " + tr_data, "write " + dst.string()});
        return kExitOk;
      }
      Session session("transform", out);
      session.set_config(config, tr_seed);
      const auto corpus = grammar::read_jsonl(tr_data);
      session.manifest().add_input(tr_data);
      std::vector<grammar::TaggedSentence> result;
      if (!tr_rule.empty() && tr_changed) {
        result = rules::build_feature_dataset(tr_rule, corpus, tr_seed).sentences;
      } else if (!tr_rule.empty()) {
        const auto& r = rules::rule(tr_rule);
        for (const auto& s : corpus) result.push_back(rules::apply_rule(r, s, tr_seed).sentence);
      } else {
        const auto profile = tr_multi ? rules::multi_profile() : load_profiles(tr_profiles).get(tr_profile);
        result = rules::build_profile_dataset(profile, corpus, tr_seed).sentences;
        if (tr_changed) std::erase_if(result, [](const auto& s) { return s.is_sae(); });
      }
      ensure_parent(dst);
      grammar::write_jsonl(dst, result);
      session.manifest().metrics["sentences"] = static_cast<double>(result.size());
      session.manifest().add_output(dst);
      session.finish(manifest_beside(dst));
      return kExitOk;
    }

    if (train_backbone->parsed()) {
      const auto config = load_config(tb);
      const fs::path dst = output_path(tb_out);
      auto resolved = config.resolved();
      if (tb.dry_run) {
        print_plan(out, "train-backbone", resolved, {"write " + dst.string()});
        return kExitOk;
      }
      Session session("train-backbone", out);
      session.set_config(resolved, config.seed);
      const auto train = grammar::read_jsonl(tb_data);
      const auto dev = grammar::read_jsonl(tb_dev);
      session.manifest().add_input(tb_data);
      session.manifest().add_input(tb_dev);
      const auto result = training::train_backbone(train, dev, config.model, config.backbone, {&err});
      ensure_parent(dst);
      model::save_checkpoint(dst, result.checkpoint);
      record_log(session.manifest(), result.log);
      session.manifest().add_output(dst);
      session.finish(manifest_beside(dst));
      return kExitOk;
    }

    if (train_adapter->parsed()) {
      const auto config = load_config(ta);
      const fs::path dst = output_path(ta_out);
      auto resolved = config.resolved();
      resolved["rule"] = ta_rule;
      if (ta.dry_run) {
        print_plan(out, "train-adapter", resolved, {"write " + dst.string()});
        return kExitOk;
      }
      Session session("train-adapter", out);
      session.set_config(resolved, config.seed);
      const auto backbone = model::load_checkpoint(ta_backbone);
      const auto train = grammar::read_jsonl(ta_data);
      const auto dev = grammar::read_jsonl(ta_dev);
      for (const auto& f : {ta_backbone, ta_data, ta_dev}) session.manifest().add_input(f);
      const auto data = rules::build_feature_dataset(ta_rule, train, config.seed);
      const auto selection = config.adapter_selection == "multi"
                                 ? rules::build_super_dataset(dev, config.seed)
                                 : rules::build_feature_dataset(ta_rule, dev, config.seed);
      const auto result =
          training::train_adapter(backbone, ta_rule, data.sentences, selection.sentences, config.adapter, {&err});
      ensure_parent(dst);
      model::save_checkpoint(dst, result.checkpoint);
      record_log(session.manifest(), result.log);
      session.manifest().metrics["examples"] = static_cast<double>(data.sentences.size());
      session.manifest().add_output(dst);
      session.finish(manifest_beside(dst));
      return kExitOk;
    }

    if (train_fusion->parsed()) {
      const auto config = load_config(tf);
      const fs::path dst = output_path(tf_out);
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(tf_adapters)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ckpt") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      if (files.empty() && tf_no_null) throw CompositionError("no adapter checkpoints in " + tf_adapters);
      auto resolved = config.resolved();
      resolved["include_null"] = tf_no_null ? "false" : "true";
      if (tf.dry_run) {
        std::vector<std::string> lines;
        for (const auto& f : files) lines.push_back("adapter " + f.string());
        lines.push_back("write " + dst.string());
        print_plan(out, "train-fusion", resolved, lines);
        return kExitOk;
      }
      Session session("train-fusion", out);
      session.set_config(resolved, config.seed);
      const auto backbone = model::load_checkpoint(tf_backbone);
      session.manifest().add_input(tf_backbone);
      std::vector<model::Checkpoint> bank;
      for (const auto& f : files) {
        bank.push_back(model::load_checkpoint(f));
        session.manifest().add_input(f);
      }
      const auto train = grammar::read_jsonl(tf_data);
      const auto dev = grammar::read_jsonl(tf_dev);
      session.manifest().add_input(tf_data);
      session.manifest().add_input(tf_dev);
      const auto data = training::fusion_training_set(config, train);
      const auto multi_dev = rules::build_super_dataset(dev, config.seed);
      const auto result =
          training::train_fusion(backbone, bank, data, multi_dev.sentences, config.fusion, !tf_no_null, {&err});
      ensure_parent(dst);
      model::save_checkpoint(dst, result.checkpoint);
      record_log(session.manifest(), result.log);
      session.manifest().add_output(dst);
      session.finish(manifest_beside(dst));
      return kExitOk;
    }

    if (eval->parsed()) {
      const auto ck = model::load_checkpoint(ev_ckpt);
      auto data = grammar::read_jsonl(ev_data);
      std::string name = ev_name.empty() ? fs::path(ev_data).stem().string() : ev_name;
      if (ev_multi) {
        data = rules::build_super_dataset(data, ev_seed).sentences;
        if (ev_name.empty()) name = "Multi";
      } else if (!ev_profile.empty()) {
        data = rules::build_profile_dataset(load_profiles(ev_profiles).get(ev_profile), data, ev_seed).sentences;
        if (ev_name.empty()) name = ev_profile;
      } else if (!ev_rule.empty()) {
        data = rules::build_feature_dataset(ev_rule, data, ev_seed).sentences;
        if (ev_name.empty()) name = ev_rule;
      }
      const auto report = training::evaluate(ck, data, name);
      const std::string line = report_json(report);
      out << line << '\n';
      if (!ev_out.empty()) {
        const fs::path dst = output_path(ev_out);
        Session session("eval", out);
        session.set_config({{"dataset", name}, {"seed", std::to_string(ev_seed)}}, ev_seed);
        session.manifest().add_input(ev_ckpt);
        session.manifest().add_input(ev_data);
        ensure_parent(dst);
        std::ofstream file(dst, std::ios::binary | std::ios::trunc);
        if (!file) throw DataError("cannot write " + dst.string());
        file << line << '\n';
        file.close();
        session.manifest().metrics["accuracy"] = report.accuracy;
        session.manifest().add_output(dst);
        session.finish(manifest_beside(dst));
      }
      return kExitOk;
    }

    if (analyze->parsed()) {
      const fs::path dir = output_path(an_out);
      std::map<std::string, std::string> config = {{"seed", std::to_string(an_seed)}};
      if (!an_rule.empty()) config["rule"] = an_rule;
      if (!an_profile.empty()) config["profile"] = an_profile;
      if (an_dry) {
        print_plan(out, "analyze", config,
                   {"write " + (dir / "traces.jsonl").string(), "write " + (dir / "utilization.csv").string(),
                    "write " + (dir / "correlations.csv").string()});
        return kExitOk;
      }
      Session session("analyze", out);
      session.set_config(config, an_seed);
      const auto ck = model::load_checkpoint(an_ckpt);
      if (ck.mode != model::Mode::kFusion) {
        throw ModeError("analyze needs a fusion checkpoint, got " + std::string(model::mode_name(ck.mode)));
      }
      auto data = grammar::read_jsonl(an_data);
      session.manifest().add_input(an_ckpt);
      session.manifest().add_input(an_data);
      if (!an_profile.empty()) {
        data = rules::build_profile_dataset(load_profiles(an_profiles).get(an_profile), data, an_seed).sentences;
      }
      if (data.empty()) throw DataError("analyze: empty corpus");
      const auto traces = analysis::trace_fusion(ck, data);
      std::vector<std::int64_t> ids;
      for (const auto& t : traces) ids.push_back(t.id);
      std::vector<analysis::OffsetMatrix> offsets;
      if (!an_rule.empty()) {
        offsets.push_back(analysis::offset_from_traces(traces, data, ck.adapters, an_rule));
      } else {
        for (const auto& rule : ck.adapters) {
          if (!rules::is_rule_name(rule)) continue;
          try {
            offsets.push_back(analysis::offset_from_traces(traces, data, ck.adapters, rule));
          } catch (const ConditioningError& e) {
            err << "analyze: skipped " << e.what() << '\n';
          }
        }
      }
      fs::create_directories(dir);
      analysis::write_traces(dir / "traces.jsonl", traces);
      analysis::write_utilization(analysis::utilization_from_traces(traces, ck.adapters, ids),
                                  dir / "utilization.csv");
      analysis::export_correlations(offsets, dir / "correlations.csv");
      for (const auto& f : {dir / "traces.jsonl", dir / "utilization.csv", dir / "correlations.csv"}) {
        session.manifest().add_output(f);
      }
      session.finish(dir / "manifest.json");
      return kExitOk;
    }

    if (pipeline->parsed()) {
      const auto config = load_config(pl);
      const training::RunLayout layout{fs::absolute(output_path(pl_out))};
      const auto resolved = config.resolved();
      if (pl.dry_run) {
        print_plan(out, "pipeline", resolved, training::pipeline_plan(config, layout));
        return kExitOk;
      }
      Session session("pipeline", out);
      session.set_config(resolved, config.seed);
      session.manifest().add_input(pl.config);
      training::PipelineOptions options;
      options.progress = &err;
      if (pl_jobs > 1) {
        // Children read the resolved settings, so --seed and defaults carry over.
        const fs::path child_config = layout.root / "adapter.cfg";
        fs::create_directories(layout.root);
        std::ofstream cfg(child_config, std::ios::binary | std::ios::trunc);
        for (const auto& [k, v] : resolved) {
          if (k != "profiles" && k != "analysis.profile") cfg << k << " = " << v << '\n';
        }
        cfg.close();
        if (!cfg) throw DataError("cannot write " + child_config.string());
        options.launch_adapters = process_launcher(pl_jobs, child_config, err);
      }
      const auto result = training::run_pipeline(config, layout, options);
      for (const auto& row : result.evals) {
        session.manifest().metrics["backbone." + row.dataset] = row.backbone_accuracy;
        session.manifest().metrics["dada." + row.dataset] = row.dada_accuracy;
      }
      for (const auto& f : result.outputs) session.manifest().add_output(f);
      session.finish(layout.root / "manifest.json");
      return kExitOk;
    }
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dada::cli
