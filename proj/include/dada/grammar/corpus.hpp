// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dada/grammar/lexicon.hpp"

namespace dada::grammar {

struct TaggedToken {
  std::string surface;
  Tag tag = Tag::kNoun;
  std::string lemma;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct TaggedSentence {
  std::int64_t id = 0;
  std::vector<TaggedToken> tokens;
  Label label = Label::kNeu;
  // Names of the rules that rewrote this sentence, sorted; empty for SAE.
  std::vector<std::string> applied_rules;

  bool is_sae() const noexcept { return applied_rules.empty(); }
  std::string text() const;

  friend bool operator==(const TaggedSentence&, const TaggedSentence&) = default;
};

enum class Split { kTrain, kDev, kTest };

std::string_view split_name(Split split);

struct Corpus {
  Split split = Split::kTrain;
  std::vector<TaggedSentence> sentences;
  std::uint64_t seed = 0;
};

// Label recomputed from lemmas: sentiment of the first evaluative adjective
// lemma (neutral if none) flipped by the parity of negation lemmas. Rules keep
// lemmas intact, so this must agree with the generation-time label before and
// after any rewrite.
Label semantic_label(const std::vector<TaggedToken>& tokens);

// One JSON object per line:
// {"id":..,"tokens":[{"surface","tag","lemma"}..],"label":"POS","applied_rules":[..]}
std::string to_json_line(const TaggedSentence& sentence);
// Throws DataError on malformed records.
TaggedSentence from_json_line(const std::string& line);

void write_jsonl(const std::filesystem::path& path, const std::vector<TaggedSentence>& sentences);
std::vector<TaggedSentence> read_jsonl(const std::filesystem::path& path);

}  // namespace dada::grammar
