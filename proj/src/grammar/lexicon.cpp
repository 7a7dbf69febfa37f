// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/grammar/lexicon.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "dada/common/errors.hpp"

namespace dada::grammar {

namespace {

constexpr std::array<std::string_view, kTagCount> kTagNames = {
    "SUBJ_PRON", "NOUN", "AUX", "COPULA", "VERB", "NEG", "DET",
    "POSS", "ADJ_POS", "ADJ_NEG", "REL_PRON", "EXPL_IT", "ADV",
};

constexpr std::array<std::string_view, kLabelCount> kLabelNames = {"POS", "NEG", "NEU"};

}  // namespace

std::string_view tag_name(Tag tag) { return kTagNames.at(static_cast<std::size_t>(tag)); }

std::optional<Tag> parse_tag(std::string_view name) {
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == name) return static_cast<Tag>(i);
  }
  return std::nullopt;
}

std::string_view label_name(Label label) { return kLabelNames.at(static_cast<std::size_t>(label)); }

std::optional<Label> parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == name) return static_cast<Label>(i);
  }
  return std::nullopt;
}

Label label_of(Sentiment sentiment, int parity) {
  if (parity != 0 && parity != 1) {
    throw ArgumentError("label_of: parity must be 0 or 1, got " + std::to_string(parity));
  }
  switch (sentiment) {
    case Sentiment::kNeutral:
      return Label::kNeu;
    case Sentiment::kPositive:
      return parity == 0 ? Label::kPos : Label::kNeg;
    case Sentiment::kNegative:
      return parity == 0 ? Label::kNeg : Label::kPos;
  }
  return Label::kNeu;
}

namespace lexicon {

const std::vector<Person>& pronouns() {
  static const std::vector<Person> kList = {
      {"i", false, true},   {"you", false, false}, {"we", false, false},
      {"they", false, false}, {"he", true, false},  {"she", true, false},
  };
  return kList;
}

const std::vector<std::string_view>& person_nouns() {
  static const std::vector<std::string_view> kList = {
      "friend", "brother", "sister", "boss", "neighbor", "cousin", "son", "teacher",
  };
  return kList;
}

const std::vector<std::string_view>& thing_nouns() {
  static const std::vector<std::string_view> kList = {
      "camera", "phone", "car", "house", "job", "book", "bike", "watch", "laptop", "jacket",
  };
  return kList;
}

const std::vector<std::string_view>& positive_adjectives() {
  static const std::vector<std::string_view> kList = {
      "good", "great", "nice", "lovely", "perfect", "solid",
  };
  return kList;
}

const std::vector<std::string_view>& negative_adjectives() {
  static const std::vector<std::string_view> kList = {
      "bad", "awful", "terrible", "poor", "ugly", "broken",
  };
  return kList;
}

const std::vector<VerbForms>& verbs() {
  static const std::vector<VerbForms> kList = {
      {"buy", "buys", "buying", "bought"},   {"want", "wants", "wanting", "wanted"},
      {"find", "finds", "finding", "found"}, {"sell", "sells", "selling", "sold"},
      {"need", "needs", "needing", "needed"}, {"see", "sees", "seeing", "seen"},
      {"bring", "brings", "bringing", "brought"},
  };
  return kList;
}

const std::vector<VerbForms>& relative_verbs() {
  static const std::vector<VerbForms> kList = {
      {"want", "wants", "wanting", "wanted"},
      {"need", "needs", "needing", "needed"},
      {"like", "likes", "liking", "liked"},
  };
  return kList;
}

const VerbForms& have() {
  static const VerbForms kHave{"have", "has", "having", "had"};
  return kHave;
}

const std::vector<std::string_view>& modals() {
  static const std::vector<std::string_view> kList = {"can", "will"};
  return kList;
}

const std::vector<std::string_view>& adverbs() {
  static const std::vector<std::string_view> kList = {"really", "very"};
  return kList;
}

const std::vector<std::string_view>& final_adverbs() {
  static const std::vector<std::string_view> kList = {"today", "now"};
  return kList;
}

bool is_negation_lemma(std::string_view lemma) {
  return lemma == "not" || lemma == "no" || lemma == "nobody";
}

std::optional<Sentiment> adjective_sentiment(std::string_view lemma) {
  const auto& pos = positive_adjectives();
  if (std::find(pos.begin(), pos.end(), lemma) != pos.end()) return Sentiment::kPositive;
  const auto& neg = negative_adjectives();
  if (std::find(neg.begin(), neg.end(), lemma) != neg.end()) return Sentiment::kNegative;
  return std::nullopt;
}

bool takes_an(std::string_view word) {
  return word == "awful" || word == "ugly";
}

std::vector<std::string> sae_surface_forms() {
  std::set<std::string> forms;
  for (const auto& p : pronouns()) forms.emplace(p.surface);
  for (auto w : person_nouns()) forms.emplace(w);
  for (auto w : thing_nouns()) forms.emplace(w);
  for (auto w : positive_adjectives()) forms.emplace(w);
  for (auto w : negative_adjectives()) forms.emplace(w);
  for (const auto* list : {&verbs(), &relative_verbs()}) {
    for (const auto& v : *list) {
      forms.emplace(v.base);
      forms.emplace(v.third);
      forms.emplace(v.progressive);
      forms.emplace(v.participle);
    }
  }
  forms.emplace(have().base);
  forms.emplace(have().third);
  for (auto w : modals()) forms.emplace(w);
  for (auto w : adverbs()) forms.emplace(w);
  for (auto w : final_adverbs()) forms.emplace(w);
  for (auto w : {"am", "is", "are", "do", "does", "not", "no", "nobody", "a", "an", "the", "my",
                 "'s", "that", "there"}) {
    forms.emplace(w);
  }
  return {forms.begin(), forms.end()};
}

}  // namespace lexicon

}  // namespace dada::grammar
