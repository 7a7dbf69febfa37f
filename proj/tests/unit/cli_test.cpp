// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dada/cli/cli.hpp"
#include "dada/cli/manifest.hpp"
#include "dada/common/errors.hpp"
#include "dada/grammar/corpus.hpp"
#include "dada/model/checkpoint.hpp"
#include "test_sentences.hpp"

namespace dada::cli {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> values(const std::map<std::string, std::string>& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(v);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("dada_cli_") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
    ::unsetenv("DADA_RUN_DIR");
  }
  void TearDown() override {
    ::unsetenv("DADA_RUN_DIR");
    fs::remove_all(dir);
  }

  int call(std::vector<std::string> args) {
    args.insert(args.begin(), "dada");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out.str("");
    err.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  fs::path dir;
  std::ostringstream out;
  std::ostringstream err;
};

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(call({}), kExitUsage);
  EXPECT_EQ(call({"frobnicate"}), kExitUsage);
  EXPECT_EQ(call({"gen", "--out", path("d"), "--bogus"}), kExitUsage);
  EXPECT_FALSE(err.str().empty());
  EXPECT_EQ(call({"gen"}), kExitUsage);
  EXPECT_EQ(call({"transform", "--data", path("x"), "--out", path("y")}), kExitUsage);
  EXPECT_EQ(call({"transform", "--rule", "got", "--multi", "--data", path("x"), "--out", path("y")}), kExitUsage);
  EXPECT_EQ(call({"--help"}), kExitOk);
}

TEST_F(Cli, GenRerunGivesIdenticalHashes) {
  ASSERT_EQ(call({"gen", "--seed", "4", "--train", "60", "--dev", "20", "--test", "20", "--out", path("a")}), kExitOk)
      << err.str();
  ASSERT_EQ(call({"gen", "--seed", "4", "--train", "60", "--dev", "20", "--test", "20", "--out", path("b")}), kExitOk);
  for (const char* f : {"train.jsonl", "dev.jsonl", "test.jsonl"}) {
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;
  }
  const auto ma = read_manifest(dir / "a" / "manifest.json");
  const auto mb = read_manifest(dir / "b" / "manifest.json");
  EXPECT_EQ(ma.command, "gen");
  EXPECT_EQ(ma.seed, 4u);
  EXPECT_EQ(ma.outputs.size(), 3u);
  EXPECT_EQ(values(ma.outputs), values(mb.outputs));
  EXPECT_NE(out.str().find("manifest.json"), std::string::npos);
  EXPECT_EQ(grammar::read_jsonl(dir / "a" / "train.jsonl").size(), 60u);
}

TEST_F(Cli, TransformNegativeConcordExample) {
  grammar::write_jsonl(dir / "example.jsonl", {testing::he_does_not_have_a_camera(1)});
  ASSERT_EQ(call({"transform", "--rule", "negative_concord", "--data", path("example.jsonl"), "--out",
                  path("nc.jsonl")}),
            kExitOk)
      << err.str();
  const auto rows = grammar::read_jsonl(dir / "nc.jsonl");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].text(), "he don't have no camera");
  EXPECT_EQ(rows[0].applied_rules, std::vector<std::string>{"negative_concord"});
  EXPECT_TRUE(fs::exists(dir / "nc.jsonl.manifest.json"));
}

TEST_F(Cli, TransformChangedOnly) {
  grammar::write_jsonl(dir / "in.jsonl", {testing::he_does_not_have_a_camera(1), testing::she_is_walking(2)});
  ASSERT_EQ(call({"transform", "--rule", "drop_aux", "--changed-only", "--data", path("in.jsonl"), "--out",
                  path("o.jsonl")}),
            kExitOk);
  const auto rows = grammar::read_jsonl(dir / "o.jsonl");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].text(), "she walking");
  EXPECT_EQ(call({"transform", "--rule", "no_such_rule", "--data", path("in.jsonl"), "--out", path("p.jsonl")}),
            kExitData);
}

TEST_F(Cli, DryRunWritesNothing) {
  ASSERT_EQ(call({"gen", "--out", path("plan"), "--dry-run"}), kExitOk);
  EXPECT_FALSE(out.str().empty());
  EXPECT_FALSE(fs::exists(dir / "plan"));

  grammar::write_jsonl(dir / "in.jsonl", {testing::she_is_walking(2)});
  ASSERT_EQ(call({"transform", "--multi", "--data", path("in.jsonl"), "--out", path("o.jsonl"), "--dry-run"}),
            kExitOk);
  EXPECT_FALSE(fs::exists(dir / "o.jsonl"));

  std::ofstream(dir / "p.cfg") << "corpus.train = 50\n";
  ASSERT_EQ(call({"pipeline", "--config", path("p.cfg"), "--out", path("run"), "--dry-run"}), kExitOk);
  EXPECT_NE(out.str().find("corpus.train"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "run"));
}

TEST_F(Cli, DataAndConfigErrorsExitTwo) {
  EXPECT_EQ(call({"transform", "--rule", "got", "--data", path("missing.jsonl"), "--out", path("o.jsonl")}),
            kExitData);
  std::ofstream(dir / "bad.jsonl") << "{not json\n";
  EXPECT_EQ(call({"transform", "--rule", "got", "--data", path("bad.jsonl"), "--out", path("o.jsonl")}), kExitData);
  EXPECT_EQ(call({"eval", "--ckpt", path("missing.ckpt"), "--data", path("bad.jsonl")}), kExitData);
  std::ofstream(dir / "typo.cfg") << "fusion.lrate = 1\n";
  EXPECT_EQ(call({"pipeline", "--config", path("typo.cfg"), "--out", path("run")}), kExitData);
  EXPECT_NE(err.str().find("fusion.lrate"), std::string::npos);
}

TEST_F(Cli, RunDirRootsRelativeOutputs) {
  ::setenv("DADA_RUN_DIR", dir.c_str(), 1);
  ASSERT_EQ(call({"gen", "--train", "5", "--dev", "5", "--test", "5", "--out", "rel"}), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "rel" / "train.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "rel" / "manifest.json"));
}

TEST_F(Cli, TrainAndEvalSmallModel) {
  ASSERT_EQ(call({"gen", "--seed", "2", "--train", "200", "--dev", "50", "--test", "50", "--out", path("d")}),
            kExitOk);
  std::ofstream(dir / "m.cfg") << "model.d_model = 16\nmodel.n_layers = 1\nmodel.n_heads = 2\nmodel.d_ff = 32\n"
                                  "model.adapter_bottleneck = 4\nbackbone.epochs = 1\nadapter.steps = 3\n"
                                  "fusion.steps = 3\n";
  ASSERT_EQ(call({"train-backbone", "--config", path("m.cfg"), "--data", path("d/train.jsonl"), "--dev",
                  path("d/dev.jsonl"), "--out", path("bb.ckpt")}),
            kExitOk)
      << err.str();
  const auto bb = model::load_checkpoint(dir / "bb.ckpt");
  EXPECT_EQ(bb.config.d_model, 16);
  ASSERT_EQ(call({"train-adapter", "--config", path("m.cfg"), "--backbone", path("bb.ckpt"), "--rule",
                  "negative_concord", "--data", path("d/train.jsonl"), "--dev", path("d/dev.jsonl"), "--out",
                  path("ad/negative_concord.ckpt")}),
            kExitOk)
      << err.str();
  ASSERT_EQ(call({"train-fusion", "--config", path("m.cfg"), "--backbone", path("bb.ckpt"), "--adapters", path("ad"),
                  "--data", path("d/train.jsonl"), "--dev", path("d/dev.jsonl"), "--out", path("fu.ckpt")}),
            kExitOk)
      << err.str();
  const auto fu = model::load_checkpoint(dir / "fu.ckpt");
  EXPECT_EQ(fu.adapters, (std::vector<std::string>{"negative_concord", "null"}));

  ASSERT_EQ(call({"eval", "--ckpt", path("fu.ckpt"), "--data", path("d/test.jsonl"), "--multi"}), kExitOk);
  EXPECT_NE(out.str().find("\"accuracy\""), std::string::npos);
  ASSERT_EQ(call({"analyze", "--ckpt", path("fu.ckpt"), "--data", path("d/test.jsonl"), "--profile", "AAVE", "--out",
                  path("an")}),
            kExitOk)
      << err.str();
  for (const char* f : {"traces.jsonl", "utilization.csv", "correlations.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / "an" / f)) << f;
  }
  EXPECT_EQ(call({"analyze", "--ckpt", path("bb.ckpt"), "--data", path("d/test.jsonl"), "--out", path("an2")}),
            kExitData);
  EXPECT_EQ(call({"train-adapter", "--config", path("m.cfg"), "--backbone", path("bb.ckpt"), "--rule", "nope", "--data",
                  path("d/train.jsonl"), "--dev", path("d/dev.jsonl"), "--out", path("x.ckpt")}),
            kExitData);
}

#ifdef DADA_EXE
// Adapter trainings farmed out to child processes of the real binary.
TEST_F(Cli, PipelineWithParallelAdapters) {
  std::ofstream(dir / "p.cfg") << "corpus.train = 400\ncorpus.dev = 150\ncorpus.test = 150\n"
                                  "model.d_model = 16\nmodel.n_layers = 2\nmodel.n_heads = 2\nmodel.d_ff = 32\n"
                                  "model.adapter_bottleneck = 4\nbackbone.epochs = 1\nadapter.steps = 5\n"
                                  "fusion.steps = 5\n";
  const std::string cmd = std::string(DADA_EXE) + " pipeline --config " + path("p.cfg") + " --out " + path("run") +
                          " --jobs 2 > " + path("stdout.txt") + " 2> " + path("stderr.txt");
  ASSERT_EQ(std::system(cmd.c_str()), 0) << read_file(dir / "stderr.txt");
  const fs::path run = dir / "run";
  EXPECT_TRUE(fs::exists(run / "checkpoints" / "backbone.ckpt"));
  EXPECT_TRUE(fs::exists(run / "checkpoints" / "fusion.ckpt"));
  int adapters = 0;
  for (const auto& e : fs::directory_iterator(run / "checkpoints" / "adapters")) adapters += e.path().extension() == ".ckpt";
  EXPECT_EQ(adapters, 10);
  const std::string csv = read_file(run / "eval" / "accuracy.csv");
  EXPECT_EQ(csv.rfind("dataset,n,backbone_accuracy,dada_accuracy\nSAE,", 0), 0u);
  EXPECT_TRUE(fs::exists(run / "analysis" / "correlations.csv"));
  const auto m = read_manifest(run / "manifest.json");
  EXPECT_EQ(m.command, "pipeline");
  EXPECT_TRUE(m.metrics.count("dada.Multi"));
}
#endif

}  // namespace
}  // namespace dada::cli
