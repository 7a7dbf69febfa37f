// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dada/grammar/corpus.hpp"
#include "dada/rules/profiles.hpp"

namespace dada::rules {

// Transformed sentences keep the id of the sentence they came from.
struct SyntheticDataset {
  std::string name;  // rule or profile name
  std::vector<grammar::TaggedSentence> sentences;
};

// Only the sentences the rule changed, ordered by id. Throws DataError on an
// empty corpus and RuleStarvedError when nothing changed.
SyntheticDataset build_feature_dataset(const std::string& rule_name,
                                       const std::vector<grammar::TaggedSentence>& corpus,
                                       std::uint64_t seed = 0);

// Profile applied to every sentence; unchanged sentences are kept, so the
// result has the corpus size and order.
SyntheticDataset build_profile_dataset(const DialectProfile& profile,
                                       const std::vector<grammar::TaggedSentence>& corpus,
                                       std::uint64_t seed = 0);

// The Multi profile over the whole corpus, unchanged sentences included.
SyntheticDataset build_super_dataset(const std::vector<grammar::TaggedSentence>& corpus,
                                     std::uint64_t seed = 0);

}  // namespace dada::rules
