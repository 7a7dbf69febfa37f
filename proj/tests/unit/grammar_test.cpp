// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "dada/common/errors.hpp"
#include "dada/grammar/generator.hpp"
#include "dada/grammar/lexicon.hpp"
#include "test_sentences.hpp"

namespace dada::grammar {
namespace {

using dada::testing::sentence;
using dada::testing::tok;

TEST(Lexicon, TagAndLabelNamesRoundTrip) {
  for (int i = 0; i < kTagCount; ++i) {
    const auto tag = static_cast<Tag>(i);
    EXPECT_EQ(parse_tag(tag_name(tag)), tag);
  }
  for (int i = 0; i < kLabelCount; ++i) {
    const auto label = static_cast<Label>(i);
    EXPECT_EQ(parse_label(label_name(label)), label);
  }
  EXPECT_FALSE(parse_tag("ADJ").has_value());
}

TEST(Lexicon, LabelIsSentimentXorNegationParity) {
  EXPECT_EQ(label_of(Sentiment::kPositive, 0), Label::kPos);
  EXPECT_EQ(label_of(Sentiment::kPositive, 1), Label::kNeg);
  EXPECT_EQ(label_of(Sentiment::kNegative, 1), Label::kPos);
  EXPECT_EQ(label_of(Sentiment::kNeutral, 1), Label::kNeu);
  EXPECT_THROW(label_of(Sentiment::kPositive, 2), ArgumentError);
}

TEST(SemanticLabel, WorkedExamples) {
  // the camera is not good
  EXPECT_EQ(semantic_label({tok("the", Tag::kDet), tok("camera", Tag::kNoun), tok("is", Tag::kCopula, "be"),
                            tok("not", Tag::kNeg), tok("good", Tag::kAdjPos)}),
            Label::kNeg);
  // nobody can not buy a good camera
  EXPECT_EQ(semantic_label({tok("nobody", Tag::kNeg), tok("can", Tag::kAux), tok("not", Tag::kNeg),
                            tok("buy", Tag::kVerb), tok("a", Tag::kDet), tok("good", Tag::kAdjPos),
                            tok("camera", Tag::kNoun)}),
            Label::kPos);
  // he has no bad car
  EXPECT_EQ(semantic_label({tok("he", Tag::kSubjPron), tok("has", Tag::kVerb, "have"), tok("no", Tag::kDet),
                            tok("bad", Tag::kAdjNeg), tok("car", Tag::kNoun)}),
            Label::kPos);
  EXPECT_EQ(dada::testing::he_does_not_have_a_camera().label, Label::kNeu);
}

TEST(Generator, SentenceIsPureFunctionOfSeedAndId) {
  EXPECT_EQ(generate_sentence(7, 123), generate_sentence(7, 123));
  EXPECT_NE(generate_sentence(7, 123).tokens, generate_sentence(8, 123).tokens);
}

TEST(Generator, SplitsHaveConsecutiveIds) {
  const auto c = generate_corpus(3, 50, 20, 10);
  ASSERT_EQ(c.train.sentences.size(), 50u);
  ASSERT_EQ(c.dev.sentences.size(), 20u);
  ASSERT_EQ(c.test.sentences.size(), 10u);
  EXPECT_EQ(c.train.sentences.front().id, 0);
  EXPECT_EQ(c.dev.sentences.front().id, 50);
  EXPECT_EQ(c.test.sentences.back().id, 79);
  EXPECT_EQ(c.dev.split, Split::kDev);
  EXPECT_THROW(generate_corpus(3, 0, 1, 1), ArgumentError);
}

TEST(Generator, CorpusInvariants) {
  const auto c = generate_corpus(11, 5000, 1, 1);
  std::array<int, kLabelCount> counts{};
  std::set<Tag> tags;
  for (const auto& s : c.train.sentences) {
    ASSERT_TRUE(s.is_sae());
    ASSERT_FALSE(s.tokens.empty());
    ASSERT_LE(static_cast<int>(s.tokens.size()), kMaxSentenceLength) << s.text();
    ASSERT_EQ(s.label, semantic_label(s.tokens)) << s.text();
    ++counts[static_cast<std::size_t>(label_index(s.label))];
    for (const auto& t : s.tokens) tags.insert(t.tag);
  }
  for (int n : counts) {
    EXPECT_GT(n, 5000 * 0.2);
    EXPECT_LT(n, 5000 * 0.5);
  }
  EXPECT_EQ(static_cast<int>(tags.size()), kTagCount);
}

TEST(Corpus, JsonLineRoundTrip) {
  auto s = dada::testing::he_does_not_have_a_camera(42);
  s.applied_rules = {"negative_concord"};
  const auto line = to_json_line(s);
  EXPECT_EQ(from_json_line(line), s);
  EXPECT_EQ(s.text(), "he does not have a camera");
}

TEST(Corpus, FileRoundTripIsBitExact) {
  const auto c = generate_corpus(5, 200, 1, 1);
  const auto path = std::filesystem::temp_directory_path() / "dada_grammar_roundtrip.jsonl";
  write_jsonl(path, c.train.sentences);
  EXPECT_EQ(read_jsonl(path), c.train.sentences);
  std::filesystem::remove(path);
}

TEST(Corpus, MalformedRecordsAreDataErrors) {
  EXPECT_THROW(from_json_line("{not json"), DataError);
  EXPECT_THROW(from_json_line(R"({"id":1,"tokens":[],"label":"POS","applied_rules":[]})"), DataError);
  EXPECT_THROW(from_json_line(R"({"id":1,"tokens":[{"surface":"a","tag":"XX","lemma":"a"}],"label":"NEU",)"
                              R"("applied_rules":[]})"),
               DataError);
  EXPECT_THROW(read_jsonl("/nonexistent/dada.jsonl"), DataError);
}

}  // namespace
}  // namespace dada::grammar
