// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-tagged sentences shared by the grammar, rules and CLI tests.

#pragma once

#include <string>
#include <vector>

#include "dada/grammar/corpus.hpp"

namespace dada::testing {

using grammar::Tag;
using grammar::TaggedSentence;
using grammar::TaggedToken;

inline TaggedToken tok(std::string surface, Tag tag, std::string lemma = {}) {
  if (lemma.empty()) lemma = surface;
  return TaggedToken{std::move(surface), tag, std::move(lemma)};
}

inline TaggedSentence sentence(std::vector<TaggedToken> tokens, std::int64_t id = 0) {
  TaggedSentence s;
  s.id = id;
  s.tokens = std::move(tokens);
  s.label = grammar::semantic_label(s.tokens);
  return s;
}

// he does not have a camera
inline TaggedSentence he_does_not_have_a_camera(std::int64_t id = 0) {
  return sentence({tok("he", Tag::kSubjPron), tok("does", Tag::kAux, "do"), tok("not", Tag::kNeg),
                   tok("have", Tag::kVerb), tok("a", Tag::kDet), tok("camera", Tag::kNoun)},
                  id);
}

// she is walking
inline TaggedSentence she_is_walking(std::int64_t id = 0) {
  return sentence({tok("she", Tag::kSubjPron), tok("is", Tag::kAux, "be"), tok("walking", Tag::kVerb, "walk")}, id);
}

// she buys a camera
inline TaggedSentence she_buys_a_camera(std::int64_t id = 0) {
  return sentence({tok("she", Tag::kSubjPron), tok("buys", Tag::kVerb, "buy"), tok("a", Tag::kDet),
                   tok("camera", Tag::kNoun)},
                  id);
}

// my sister 's son is not buying a camera
inline TaggedSentence my_sisters_son_is_not_buying(std::int64_t id = 0) {
  return sentence({tok("my", Tag::kDet), tok("sister", Tag::kNoun), tok("'s", Tag::kPoss), tok("son", Tag::kNoun),
                   tok("is", Tag::kAux, "be"), tok("not", Tag::kNeg), tok("buying", Tag::kVerb, "buy"),
                   tok("a", Tag::kDet), tok("camera", Tag::kNoun)},
                  id);
}

}  // namespace dada::testing
