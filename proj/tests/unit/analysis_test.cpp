// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <numeric>

#include "dada/analysis/analysis.hpp"
#include "dada/common/errors.hpp"
#include "dada/grammar/generator.hpp"
#include "dada/rules/datasets.hpp"

namespace dada::analysis {
namespace {

namespace fs = std::filesystem;
using grammar::TaggedSentence;

model::ModelConfig small_config() {
  model::ModelConfig c;
  c.d_model = 8;
  c.n_layers = 2;
  c.n_heads = 2;
  c.d_ff = 16;
  c.max_len = 16;
  c.adapter_bottleneck = 4;
  return c;
}

model::Checkpoint fusion_checkpoint(const std::vector<std::string>& bank) {
  return model::initial_checkpoint(small_config(), model::Vocabulary::standard(), model::Mode::kFusion, bank, 5);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::int64_t> ids_of(const std::vector<FusionTrace>& traces) {
  std::vector<std::int64_t> ids;
  for (const auto& t : traces) ids.push_back(t.id);
  return ids;
}

FusionTrace trace(std::int64_t id, std::vector<std::vector<float>> rows) {
  Tensor t({static_cast<int>(rows.size()), static_cast<int>(rows.front().size())});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) t.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  }
  return FusionTrace{id, {t}};
}

class Traced : public ::testing::Test {
 protected:
  void SetUp() override {
    bank = {"got", "negative_concord", "drop_aux", "null"};
    ck = fusion_checkpoint(bank);
    const auto corpus = grammar::generate_corpus(21, 300, 1, 1).train.sentences;
    sentences = rules::build_super_dataset(corpus).sentences;
    traces = trace_fusion(ck, sentences);
    dir = fs::temp_directory_path() / ("dada_analysis_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::vector<std::string> bank;
  model::Checkpoint ck;
  std::vector<TaggedSentence> sentences;
  std::vector<FusionTrace> traces;
  fs::path dir;
};

TEST(Utilization, HandAveragingIsPerInputThenAcrossInputs) {
  // Input 7: positions average to (0.5, 0.5). Input 8: (0.2, 0.8).
  const std::vector<FusionTrace> traces = {trace(7, {{1.0f, 0.0f}, {0.0f, 1.0f}}), trace(8, {{0.2f, 0.8f}})};
  const auto u = utilization_from_traces(traces, {"a", "null"}, {7, 8});
  EXPECT_EQ(u.n_inputs, 2);
  EXPECT_EQ(u.n_layers, 1);
  EXPECT_NEAR(u.at(0, 0), 0.35, 1e-7);
  EXPECT_NEAR(u.at(0, 1), 0.65, 1e-7);

  const auto only8 = utilization_from_traces(traces, {"a", "null"}, {8}, "got");
  EXPECT_EQ(only8.conditioning, "got");
  EXPECT_NEAR(only8.at(0, 0), 0.2, 1e-7);
  EXPECT_THROW(utilization_from_traces(traces, {"a", "null"}, {99}), DataError);
}

TEST_F(Traced, TracesAreSimplexRows) {
  ASSERT_EQ(traces.size(), sentences.size());
  for (std::size_t k = 0; k < traces.size(); ++k) {
    EXPECT_EQ(traces[k].id, sentences[k].id);
    ASSERT_EQ(traces[k].layers.size(), 2u);
    for (const auto& layer : traces[k].layers) {
      EXPECT_EQ(layer.shape()[0], static_cast<int>(sentences[k].tokens.size()));
      ASSERT_EQ(layer.shape()[1], 4);
      for (int t = 0; t < layer.shape()[0]; ++t) {
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) sum += layer.at(t, i);
        EXPECT_NEAR(sum, 1.0, 1e-5);
      }
    }
  }
}

TEST_F(Traced, MatrixMatchesIndependentAverage) {
  const auto u = utilization_matrix(ck, sentences);
  EXPECT_EQ(u.adapters, bank);
  EXPECT_EQ(u.n_inputs, static_cast<int>(sentences.size()));
  for (int l = 0; l < 2; ++l) {
    double row = 0.0;
    for (int i = 0; i < 4; ++i) {
      long double acc = 0.0L;
      for (const auto& tr : traces) {
        const auto& s = tr.layers[static_cast<std::size_t>(l)];
        long double per_input = 0.0L;
        for (int t = 0; t < s.shape()[0]; ++t) per_input += s.at(t, i);
        acc += per_input / s.shape()[0];
      }
      const double expected = static_cast<double>(acc / traces.size());
      EXPECT_NEAR(u.at(l, i), expected, 1e-9);
      EXPECT_GE(u.at(l, i), 0.0);
      EXPECT_LE(u.at(l, i), 1.0);
      row += u.at(l, i);
    }
    EXPECT_NEAR(row, 1.0, 1e-6);
  }
}

TEST_F(Traced, DisjointSlicesCombineLinearly) {
  const auto ids = ids_of(traces);
  const std::size_t cut = ids.size() / 3;
  const std::vector<std::int64_t> a(ids.begin(), ids.begin() + static_cast<long>(cut));
  const std::vector<std::int64_t> b(ids.begin() + static_cast<long>(cut), ids.end());
  const auto ua = utilization_from_traces(traces, bank, a);
  const auto ub = utilization_from_traces(traces, bank, b);
  const auto all = utilization_from_traces(traces, bank, ids);
  for (std::size_t k = 0; k < all.values.size(); ++k) {
    const double mixed = (ua.values[k] * ua.n_inputs + ub.values[k] * ub.n_inputs) / (ua.n_inputs + ub.n_inputs);
    EXPECT_NEAR(all.values[k], mixed, 1e-12);
  }
}

TEST(Utilization, SingleAdapterBankIsAllOnes) {
  const auto ck = fusion_checkpoint({"null"});
  const auto corpus = grammar::generate_corpus(3, 40, 1, 1).train.sentences;
  const auto u = utilization_matrix(ck, corpus);
  for (double v : u.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Utilization, NeedsAFusionCheckpoint) {
  const auto backbone =
      model::initial_checkpoint(small_config(), model::Vocabulary::standard(), model::Mode::kBackbone, {}, 1);
  const auto corpus = grammar::generate_corpus(3, 5, 1, 1).train.sentences;
  EXPECT_THROW(trace_fusion(backbone, corpus), ModeError);
  EXPECT_THROW(utilization_matrix(backbone, corpus), ModeError);
  EXPECT_THROW(offset_matrix(backbone, corpus, "got"), ModeError);
  EXPECT_THROW(utilization_matrix(fusion_checkpoint({"null"}), {}), DataError);
}

TEST_F(Traced, OffsetRowsSumToZero) {
  for (const std::string rule : {"negative_concord", "drop_aux", "lexical"}) {
    const auto off = offset_from_traces(traces, sentences, bank, rule);
    EXPECT_EQ(off.rule, rule);
    EXPECT_GT(off.n_rule_inputs, 0);
    for (int l = 0; l < off.n_layers; ++l) {
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) sum += off.at(l, i);
      EXPECT_NEAR(sum, 0.0, 1e-6);
    }
  }
}

TEST_F(Traced, OffsetIsConditionedMeanMinusDatasetMean) {
  const auto off = offset_from_traces(traces, sentences, bank, "negative_concord");
  std::vector<std::int64_t> fired;
  for (const auto& s : sentences) {
    if (std::find(s.applied_rules.begin(), s.applied_rules.end(), "negative_concord") != s.applied_rules.end()) {
      fired.push_back(s.id);
    }
  }
  EXPECT_EQ(off.n_rule_inputs, static_cast<int>(fired.size()));
  const auto cond = utilization_from_traces(traces, bank, fired);
  const auto all = utilization_from_traces(traces, bank, ids_of(traces));
  for (std::size_t k = 0; k < off.values.size(); ++k) {
    EXPECT_NEAR(off.values[k], cond.values[k] - all.values[k], 1e-12);
  }
}

TEST_F(Traced, RuleOnEveryInputGivesZeroOffset) {
  auto everywhere = sentences;
  for (auto& s : everywhere) s.applied_rules = {"got"};
  const auto off = offset_from_traces(traces, everywhere, bank, "got");
  for (double v : off.values) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST_F(Traced, UnfiredRuleIsConditioningError) {
  auto plain = sentences;
  for (auto& s : plain) s.applied_rules.clear();
  EXPECT_THROW(offset_from_traces(traces, plain, bank, "got"), ConditioningError);
}

TEST_F(Traced, SingleCellCsv) {
  OffsetMatrix m;
  m.rule = "got";
  m.n_layers = 1;
  m.adapters = {"got"};
  m.n_rule_inputs = 3;
  m.values = {0.0};
  const auto path = dir / "one.csv";
  export_correlations({m}, path);
  const std::string text = read_file(path);
  EXPECT_EQ(text[0], '#');
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find("\nlayer,adapter,rule,offset\n0,got,got,0\n"), std::string::npos);
}

TEST_F(Traced, CorrelationExportIsStable) {
  std::vector<OffsetMatrix> matrices;
  for (const std::string rule : {"negative_concord", "drop_aux"}) {
    matrices.push_back(offset_from_traces(traces, sentences, bank, rule));
  }
  export_correlations(matrices, dir / "a.csv");
  export_correlations(matrices, dir / "b.csv");
  const std::string a = read_file(dir / "a.csv");
  EXPECT_EQ(a, read_file(dir / "b.csv"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 2 + 2 * 2 * 4);

  auto bad = matrices;
  bad[1].adapters.pop_back();
  bad[1].values.resize(6);
  EXPECT_THROW(export_correlations(bad, dir / "c.csv"), ArgumentError);
  EXPECT_THROW(export_correlations(matrices, dir / "missing" / "x.csv"), DataError);
}

TEST_F(Traced, UtilizationCsvLayout) {
  const auto u = utilization_matrix(ck, sentences);
  write_utilization(u, dir / "u.csv");
  const std::string text = read_file(dir / "u.csv");
  EXPECT_EQ(text.rfind("layer,adapter,utilization\n0,got,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 4);
}

TEST_F(Traced, TraceFileRoundTrip) {
  write_traces(dir / "t.jsonl", traces);
  const auto back = read_traces(dir / "t.jsonl");
  ASSERT_EQ(back.size(), traces.size());
  for (std::size_t k = 0; k < traces.size(); ++k) {
    EXPECT_EQ(back[k].id, traces[k].id);
    ASSERT_EQ(back[k].layers.size(), traces[k].layers.size());
    for (std::size_t l = 0; l < traces[k].layers.size(); ++l) {
      ASSERT_EQ(back[k].layers[l].shape(), traces[k].layers[l].shape());
      const auto x = traces[k].layers[l].data();
      const auto y = back[k].layers[l].data();
      for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(x[j], y[j], 1e-6);
    }
  }
  const auto u1 = utilization_from_traces(traces, bank, ids_of(traces));
  const auto u2 = utilization_from_traces(back, bank, ids_of(back));
  for (std::size_t k = 0; k < u1.values.size(); ++k) EXPECT_NEAR(u1.values[k], u2.values[k], 1e-6);
}

TEST(Attribution, RanksLowerLayerMean) {
  OffsetMatrix m;
  m.rule = "got";
  m.n_layers = 4;
  m.adapters = {"a", "b", "got", "null"};
  // Lower half = layers 0 and 1. Means: a 0.03, b -0.01, got 0.02, null -0.04.
  m.values = {0.04, -0.02, 0.01, -0.03,  //
              0.02, 0.00,  0.03, -0.05,  //
              -0.5, 0.1,   -0.4, 0.8,    //
              0.0,  0.0,   0.0,  0.0};
  const auto r = attribute(m);
  EXPECT_EQ(r.rule, "got");
  EXPECT_NEAR(r.lower_offset, 0.02, 1e-12);
  EXPECT_EQ(r.rank, 2);
  EXPECT_TRUE(r.positive_top3());

  m.rule = "lexical";
  EXPECT_THROW(attribute(m), ArgumentError);
}

TEST(Attribution, NegativeOffsetFailsEvenWhenTopRanked) {
  OffsetMatrix m;
  m.rule = "got";
  m.n_layers = 2;
  m.adapters = {"got", "null"};
  m.values = {-0.01, -0.02, 0.5, -0.5};
  const auto r = attribute(m);
  EXPECT_EQ(r.rank, 1);
  EXPECT_FALSE(r.positive_top3());
}

}  // namespace
}  // namespace dada::analysis
