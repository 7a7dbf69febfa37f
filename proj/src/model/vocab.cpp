// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/model/vocab.hpp"

#include <algorithm>

#include "dada/common/errors.hpp"
#include "dada/grammar/lexicon.hpp"
#include "dada/rules/rules.hpp"

namespace dada::model {

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw ConfigError("vocabulary contains an empty token");
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw ConfigError("vocabulary lists '" + tokens_[i] + "' twice");
    }
  }
}

Vocabulary Vocabulary::standard() {
  auto tokens = grammar::lexicon::sae_surface_forms();
  const auto dialect = rules::dialect_surface_forms();
  tokens.insert(tokens.end(), dialect.begin(), dialect.end());
  std::sort(tokens.begin(), tokens.end());
  return Vocabulary(std::move(tokens));
}

int Vocabulary::id(const std::string& surface) const {
  const auto it = ids_.find(surface);
  if (it == ids_.end()) throw DataError("token '" + surface + "' is not in the vocabulary");
  return it->second;
}

std::vector<int> Vocabulary::encode(const grammar::TaggedSentence& sentence) const {
  std::vector<int> out;
  out.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) out.push_back(id(t.surface));
  return out;
}

}  // namespace dada::model
