// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Closed word lists of the synthetic SAE grammar, the tag and label enums,
// and the label function.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dada::grammar {

enum class Tag {
  kSubjPron,
  kNoun,
  kAux,
  kCopula,
  kVerb,
  kNeg,
  kDet,
  kPoss,
  kAdjPos,
  kAdjNeg,
  kRelPron,
  kExplIt,
  kAdv,
};

inline constexpr int kTagCount = 13;

std::string_view tag_name(Tag tag);
std::optional<Tag> parse_tag(std::string_view name);

enum class Label { kPos, kNeg, kNeu };

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view name);
inline int label_index(Label label) { return static_cast<int>(label); }
inline constexpr int kLabelCount = 3;

enum class Sentiment { kPositive, kNegative, kNeutral };

// Sentiment of the content lexeme flipped by negation parity. Parity must be
// 0 or 1 (ArgumentError otherwise); neutral stays neutral.
Label label_of(Sentiment sentiment, int parity);

struct VerbForms {
  std::string_view base;
  std::string_view third;       // she buys
  std::string_view progressive; // she is buying
  std::string_view participle;  // she has bought
};

struct Person {
  std::string_view surface;
  bool third_singular;
  bool first_singular;
};

namespace lexicon {

// Subject pronouns.
const std::vector<Person>& pronouns();
// Nouns for people (subjects, possessors) and things (objects, copula subjects).
const std::vector<std::string_view>& person_nouns();
const std::vector<std::string_view>& thing_nouns();
const std::vector<std::string_view>& positive_adjectives();
const std::vector<std::string_view>& negative_adjectives();
// Transitive verbs used as main verbs.
const std::vector<VerbForms>& verbs();
// Verbs allowed inside a relative clause ("that she wants").
const std::vector<VerbForms>& relative_verbs();
const VerbForms& have();
const std::vector<std::string_view>& modals();
const std::vector<std::string_view>& adverbs();
const std::vector<std::string_view>& final_adverbs();

// Lemmas that count toward logical-negation parity.
bool is_negation_lemma(std::string_view lemma);
// Sentiment of an evaluative adjective lemma, nullopt for any other lemma.
std::optional<Sentiment> adjective_sentiment(std::string_view lemma);
// Whether "an" rather than "a" precedes this word.
bool takes_an(std::string_view word);

// Every surface form the generator can emit, sorted and unique.
std::vector<std::string> sae_surface_forms();

}  // namespace lexicon

}  // namespace dada::grammar
