// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/rules/datasets.hpp"

#include <algorithm>

#include "dada/common/errors.hpp"
#include "dada/rules/rules.hpp"

namespace dada::rules {

SyntheticDataset build_feature_dataset(const std::string& rule_name,
                                       const std::vector<grammar::TaggedSentence>& corpus,
                                       std::uint64_t seed) {
  if (corpus.empty()) throw DataError("build_feature_dataset: empty corpus");
  const Rule& r = rule(rule_name);
  SyntheticDataset out{rule_name, {}};
  for (const auto& s : corpus) {
    auto result = apply_rule(r, s, seed);
    if (result.applied) out.sentences.push_back(std::move(result.sentence));
  }
  if (out.sentences.empty()) throw RuleStarvedError(rule_name);
  std::stable_sort(out.sentences.begin(), out.sentences.end(),
                   [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

SyntheticDataset build_profile_dataset(const DialectProfile& profile,
                                       const std::vector<grammar::TaggedSentence>& corpus,
                                       std::uint64_t seed) {
  SyntheticDataset out{profile.name, {}};
  out.sentences.reserve(corpus.size());
  for (const auto& s : corpus) out.sentences.push_back(apply_profile(profile, s, seed));
  return out;
}

SyntheticDataset build_super_dataset(const std::vector<grammar::TaggedSentence>& corpus,
                                     std::uint64_t seed) {
  return build_profile_dataset(multi_profile(), corpus, seed);
}

}  // namespace dada::rules
