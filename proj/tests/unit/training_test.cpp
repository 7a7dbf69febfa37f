// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "dada/common/errors.hpp"
#include "dada/common/key_value.hpp"
#include "dada/grammar/generator.hpp"
#include "dada/model/checkpoint.hpp"
#include "dada/rules/datasets.hpp"
#include "dada/training/pipeline.hpp"
#include "dada/training/trainer.hpp"

namespace dada::training {
namespace {

using grammar::TaggedSentence;
using model::Checkpoint;

model::ModelConfig tiny_config() {
  model::ModelConfig c;
  c.d_model = 16;
  c.n_layers = 1;
  c.n_heads = 2;
  c.d_ff = 32;
  c.max_len = 16;
  c.adapter_bottleneck = 4;
  return c;
}

TrainConfig stage_config(Stage stage, float lr, int steps, std::uint64_t seed = 3) {
  TrainConfig c;
  c.stage = stage;
  c.lr = lr;
  c.batch_size = 32;
  c.steps = steps;
  c.seed = seed;
  return c;
}

bool same_params(const ParamStore& a, const ParamStore& b, std::string_view prefix = "") {
  const auto pa = a.paths_with_prefix(prefix);
  if (pa != b.paths_with_prefix(prefix)) return false;
  for (const auto& p : pa) {
    if (!bitwise_equal(a.get(p), b.get(p))) return false;
  }
  return true;
}

// One small corpus and backbone shared by every test in the suite.
class Trained : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto splits = grammar::generate_corpus(11, 600, 150, 10);
    train_ = new std::vector<TaggedSentence>(splits.train.sentences);
    dev_ = new std::vector<TaggedSentence>(splits.dev.sentences);
    backbone_ = new TrainResult(
        train_backbone(*train_, *dev_, tiny_config(), stage_config(Stage::kBackbone, 3e-3f, 60)));
    nc_train_ = new std::vector<TaggedSentence>(rules::build_feature_dataset("negative_concord", *train_).sentences);
    nc_dev_ = new std::vector<TaggedSentence>(rules::build_feature_dataset("negative_concord", *dev_).sentences);
  }
  static void TearDownTestSuite() {
    delete train_;
    delete dev_;
    delete backbone_;
    delete nc_train_;
    delete nc_dev_;
  }

  static const Checkpoint& backbone() { return backbone_->checkpoint; }
  static TrainResult adapter(const std::string& rule, int steps, float lr = 3e-3f) {
    return train_adapter(backbone(), rule, *nc_train_, *nc_dev_, stage_config(Stage::kAdapter, lr, steps));
  }

  static std::vector<TaggedSentence>* train_;
  static std::vector<TaggedSentence>* dev_;
  static TrainResult* backbone_;
  static std::vector<TaggedSentence>* nc_train_;
  static std::vector<TaggedSentence>* nc_dev_;
};

std::vector<TaggedSentence>* Trained::train_ = nullptr;
std::vector<TaggedSentence>* Trained::dev_ = nullptr;
TrainResult* Trained::backbone_ = nullptr;
std::vector<TaggedSentence>* Trained::nc_train_ = nullptr;
std::vector<TaggedSentence>* Trained::nc_dev_ = nullptr;

TEST_F(Trained, BackboneLearnsSomething) {
  const auto& log = backbone_->log;
  ASSERT_FALSE(log.evals.empty());
  EXPECT_EQ(log.evals.front().step, 0);
  EXPECT_EQ(log.steps_run, 60);
  EXPECT_GE(log.best_dev_accuracy, log.evals.front().dev_accuracy);
  EXPECT_TRUE(backbone().params.trainable_paths().empty());
  EXPECT_EQ(backbone().lineage.backbone_hash, backbone().backbone_hash());
}

TEST_F(Trained, ZeroLearningRateKeepsInitialisation) {
  const auto cfg = stage_config(Stage::kBackbone, 0.0f, 5);
  const auto r = train_backbone(*train_, *dev_, tiny_config(), cfg);
  const auto init = model::initial_checkpoint(tiny_config(), model::Vocabulary::standard(), model::Mode::kBackbone,
                                              {}, cfg.seed);
  EXPECT_TRUE(same_params(r.checkpoint.params, init.params));
  for (const auto& e : r.log.evals) EXPECT_EQ(e.dev_accuracy, r.log.evals.front().dev_accuracy);
}

TEST_F(Trained, BackboneSeedRepeatIsIdentical) {
  const auto cfg = stage_config(Stage::kBackbone, 3e-3f, 10);
  const auto a = train_backbone(*train_, *dev_, tiny_config(), cfg);
  const auto b = train_backbone(*train_, *dev_, tiny_config(), cfg);
  EXPECT_TRUE(same_params(a.checkpoint.params, b.checkpoint.params));
  EXPECT_EQ(a.log.best_dev_accuracy, b.log.best_dev_accuracy);
}

TEST_F(Trained, BackboneRejectsBadData) {
  const auto cfg = stage_config(Stage::kBackbone, 1e-3f, 1);
  auto transformed = *dev_;
  transformed[3].applied_rules = {"got"};
  EXPECT_THROW(train_backbone(*train_, transformed, tiny_config(), cfg), DataError);
  EXPECT_THROW(train_backbone(transformed, *dev_, tiny_config(), cfg), DataError);
  EXPECT_THROW(train_backbone({}, *dev_, tiny_config(), cfg), DataError);
  EXPECT_THROW(train_backbone(*train_, {}, tiny_config(), cfg), DataError);
}

TEST_F(Trained, OverlongInputIsLengthError) {
  auto c = tiny_config();
  c.max_len = 4;
  EXPECT_THROW(train_backbone(*train_, *dev_, c, stage_config(Stage::kBackbone, 1e-3f, 1)), LengthError);
}

TEST_F(Trained, DivergingRunIsNumericError) {
  EXPECT_THROW(train_backbone(*train_, *dev_, tiny_config(), stage_config(Stage::kBackbone, 1e30f, 20)),
               NumericError);
}

TEST_F(Trained, EvaluateCounts) {
  const auto r = evaluate(backbone(), *dev_, "dev");
  EXPECT_EQ(r.dataset, "dev");
  EXPECT_EQ(r.n, static_cast<int>(dev_->size()));
  EXPECT_EQ(std::accumulate(r.gold.begin(), r.gold.end(), 0), r.n);
  EXPECT_EQ(std::accumulate(r.predicted.begin(), r.predicted.end(), 0), r.n);
  EXPECT_EQ(std::accumulate(r.correct_by_class.begin(), r.correct_by_class.end(), 0), r.correct);
  EXPECT_DOUBLE_EQ(r.accuracy, static_cast<double>(r.correct) / r.n);
  for (int k = 0; k < 3; ++k) EXPECT_LE(r.correct_by_class[k], r.gold[k]);

  const auto again = evaluate(backbone(), *dev_, "dev");
  EXPECT_EQ(again.predicted, r.predicted);
  EXPECT_EQ(again.correct, r.correct);
}

TEST_F(Trained, EvaluateMissingClassCountsZero) {
  std::vector<TaggedSentence> no_neutral;
  for (const auto& s : *dev_) {
    if (s.label != grammar::Label::kNeu) no_neutral.push_back(s);
  }
  const auto r = evaluate(backbone(), no_neutral);
  EXPECT_EQ(r.gold[static_cast<int>(grammar::Label::kNeu)], 0);
  EXPECT_THROW(evaluate(backbone(), {}), DataError);
}

TEST_F(Trained, AdapterKeepsBackboneFrozen) {
  const auto r = adapter("negative_concord", 20);
  EXPECT_EQ(r.log.frozen_hash_before, r.log.frozen_hash_after);
  EXPECT_EQ(r.checkpoint.backbone_hash(), backbone().backbone_hash());
  EXPECT_EQ(r.checkpoint.lineage.backbone_hash, backbone().backbone_hash());
  EXPECT_TRUE(same_params(r.checkpoint.params, backbone().params, "backbone."));
  EXPECT_EQ(r.checkpoint.mode, model::Mode::kAdapter);
  ASSERT_EQ(r.checkpoint.adapters, std::vector<std::string>{"negative_concord"});
  EXPECT_EQ(r.checkpoint.lineage.adapter_hashes.at("negative_concord"),
            r.checkpoint.adapter_hash("negative_concord"));
}

TEST_F(Trained, AdapterZeroStepsIsItsInitialisation) {
  const auto zero = adapter("negative_concord", 0);
  const auto still = adapter("negative_concord", 15, 0.0f);
  EXPECT_EQ(zero.log.steps_run, 0);
  EXPECT_EQ(zero.log.best_step, 0);
  EXPECT_TRUE(same_params(zero.checkpoint.params, still.checkpoint.params));
}

TEST_F(Trained, AdapterAtLeastMatchesBackboneOnItsSlice) {
  const auto r = adapter("negative_concord", 40);
  EXPECT_GE(evaluate(r.checkpoint, *nc_dev_).accuracy, evaluate(backbone(), *nc_dev_).accuracy);
}

TEST_F(Trained, AdapterErrors) {
  const auto cfg = stage_config(Stage::kAdapter, 1e-3f, 1);
  const auto a = adapter("negative_concord", 0);
  EXPECT_THROW(train_adapter(a.checkpoint, "got", *nc_train_, *nc_dev_, cfg), ModeError);
  EXPECT_THROW(train_adapter(backbone(), "null", *nc_train_, *nc_dev_, cfg), ArgumentError);
  EXPECT_THROW(train_adapter(backbone(), "no_such_rule", *nc_train_, *nc_dev_, cfg), ConfigError);
  EXPECT_THROW(train_adapter(backbone(), "got", {}, *nc_dev_, cfg), RuleStarvedError);
  EXPECT_THROW(train_adapter(backbone(), "got", *nc_train_, {}, cfg), DataError);
}

TEST_F(Trained, FusionFreezesBackboneAndAdapters) {
  const auto nc = adapter("negative_concord", 10);
  const auto got = adapter("got", 10);
  const auto r = train_fusion(backbone(), {nc.checkpoint, got.checkpoint}, *nc_train_, *nc_dev_,
                              stage_config(Stage::kFusion, 3e-3f, 10));
  const auto& ck = r.checkpoint;
  EXPECT_EQ(ck.mode, model::Mode::kFusion);
  EXPECT_EQ(ck.adapters, (std::vector<std::string>{"negative_concord", "got", "null"}));
  EXPECT_EQ(r.log.frozen_hash_before, r.log.frozen_hash_after);
  EXPECT_EQ(ck.lineage.backbone_hash, backbone().backbone_hash());
  EXPECT_EQ(ck.lineage.adapter_hashes.at("negative_concord"), nc.checkpoint.adapter_hash("negative_concord"));
  EXPECT_EQ(ck.lineage.adapter_hashes.at("got"), got.checkpoint.adapter_hash("got"));
  EXPECT_TRUE(same_params(ck.params, backbone().params, "backbone."));
  EXPECT_TRUE(same_params(ck.params, nc.checkpoint.params, "adapter.negative_concord."));
  EXPECT_TRUE(same_params(ck.params, got.checkpoint.params, "adapter.got."));

  EXPECT_EQ(r.log.steps_run, 10);
  EXPECT_TRUE(ck.params.trainable_paths().empty());
}

TEST_F(Trained, NullOnlyBankStaysCloseToBackbone) {
  const auto r = train_fusion(backbone(), {}, *train_, *dev_, stage_config(Stage::kFusion, 1e-3f, 20));
  EXPECT_EQ(r.checkpoint.adapters, std::vector<std::string>{"null"});
  EXPECT_NEAR(evaluate(r.checkpoint, *dev_).accuracy, evaluate(backbone(), *dev_).accuracy, 0.01);
}

TEST_F(Trained, FusionCompositionErrors) {
  const auto cfg = stage_config(Stage::kFusion, 1e-3f, 1);
  const auto nc = adapter("negative_concord", 0);

  EXPECT_THROW(train_fusion(backbone(), {nc.checkpoint, nc.checkpoint}, *nc_train_, *nc_dev_, cfg),
               CompositionError);
  EXPECT_THROW(train_fusion(backbone(), {backbone()}, *nc_train_, *nc_dev_, cfg), CompositionError);

  const auto other = train_backbone(*train_, *dev_, tiny_config(), stage_config(Stage::kBackbone, 3e-3f, 2, 99));
  EXPECT_THROW(train_fusion(other.checkpoint, {nc.checkpoint}, *nc_train_, *nc_dev_, cfg), CompositionError);

  auto wide = tiny_config();
  wide.d_ff = 48;
  const auto wide_bb = train_backbone(*train_, *dev_, wide, stage_config(Stage::kBackbone, 3e-3f, 1));
  EXPECT_THROW(train_fusion(wide_bb.checkpoint, {nc.checkpoint}, *nc_train_, *nc_dev_, cfg), CompositionError);

  EXPECT_THROW(train_fusion(nc.checkpoint, {}, *nc_train_, *nc_dev_, cfg), ModeError);
  EXPECT_THROW(train_fusion(backbone(), {}, *nc_train_, *nc_dev_, cfg, false), ContractError);
  EXPECT_THROW(train_fusion(backbone(), {nc.checkpoint}, {}, *nc_dev_, cfg), DataError);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.steps = 5;
  c.epochs = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.lr = -1.0f;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.lr = std::nanf("");
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = TrainConfig{};
  c.eval_every = -2;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(TrainConfig, StageDefaults) {
  const auto b = TrainConfig::defaults(Stage::kBackbone);
  EXPECT_EQ(b.epochs, 3);
  EXPECT_FLOAT_EQ(b.lr, 1e-3f);
  const auto a = TrainConfig::defaults(Stage::kAdapter);
  EXPECT_EQ(a.steps, 2000);
  EXPECT_FLOAT_EQ(a.lr, 3e-4f);
  const auto f = TrainConfig::defaults(Stage::kFusion);
  EXPECT_EQ(f.epochs, 5);
  for (const auto& c : {a, b, f}) EXPECT_EQ(c.batch_size, 64);
}

TEST(TrainConfig, TotalSteps) {
  TrainConfig c;
  c.batch_size = 64;
  c.epochs = 3;
  EXPECT_EQ(c.total_steps(640), 30);
  EXPECT_EQ(c.total_steps(641), 33);
  c.epochs = 0;
  c.steps = 7;
  EXPECT_EQ(c.total_steps(100000), 7);
}

TEST(TrainConfig, FromConfigOverrides) {
  const auto kv = KeyValueConfig::parse("seed = 9\nadapter.steps = 50\nadapter.lr = 0.01\n");
  const auto a = TrainConfig::from_config(kv, Stage::kAdapter, "adapter.");
  EXPECT_EQ(a.steps, 50);
  EXPECT_FLOAT_EQ(a.lr, 0.01f);
  EXPECT_EQ(a.seed, 9u);
  const auto f = TrainConfig::from_config(KeyValueConfig::parse("fusion.steps = 4\n"), Stage::kFusion, "fusion.");
  EXPECT_EQ(f.steps, 4);
  EXPECT_EQ(f.epochs, 0);
  EXPECT_THROW(TrainConfig::from_config(KeyValueConfig::parse("fusion.steps = 4\nfusion.epochs = 1\n"),
                                        Stage::kFusion, "fusion."),
               ConfigError);
}

TEST(PipelineConfig, ParsesKnownKeys) {
  const auto kv = KeyValueConfig::parse(
      "seed = 4\ncorpus.train = 100\nmodel.d_model = 32\nmodel.n_heads = 2\nfusion.lr = 0.0001\n"
      "analysis.profile = IndE\nadapter.selection = multi\nfusion.data = super+sae\n");
  const auto c = PipelineConfig::from_config(kv);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.n_train, 100);
  EXPECT_EQ(c.model.d_model, 32);
  EXPECT_FLOAT_EQ(c.fusion.lr, 1e-4f);
  EXPECT_EQ(c.analysis_profile, "IndE");
  EXPECT_EQ(c.adapter_selection, "multi");
  EXPECT_EQ(c.fusion_data, "super+sae");

  // The resolved view parses back to the same configuration.
  KeyValueConfig back;
  for (const auto& [k, v] : c.resolved()) {
    if (k != "profiles") back.set(k, v);
  }
  EXPECT_EQ(PipelineConfig::from_config(back).resolved(), c.resolved());
}

TEST(PipelineConfig, FusionTrainingSet) {
  const auto sae = grammar::generate_corpus(2, 50, 1, 1).train.sentences;
  PipelineConfig c;
  const auto super = fusion_training_set(c, sae);
  ASSERT_EQ(super.size(), sae.size());
  EXPECT_EQ(super, rules::build_super_dataset(sae, c.seed).sentences);
  c.fusion_data = "super+sae";
  const auto mixed = fusion_training_set(c, sae);
  ASSERT_EQ(mixed.size(), 2 * sae.size());
  EXPECT_TRUE(std::equal(sae.begin(), sae.end(), mixed.begin() + static_cast<long>(sae.size())));
}

TEST(PipelineConfig, RejectsBadConfigs) {
  EXPECT_THROW(PipelineConfig::from_config(KeyValueConfig::parse("fusion.lrr = 1\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_config(KeyValueConfig::parse("analysis.profile = Klingon\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_config(KeyValueConfig::parse("adapter.selection = best\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_config(KeyValueConfig::parse("corpus.dev = 0\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_config(KeyValueConfig::parse("fusion.data = sae\n")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_config(KeyValueConfig::parse("model.d_model = 30\nmodel.n_heads = 4\n")),
               ConfigError);
}

}  // namespace
}  // namespace dada::training
