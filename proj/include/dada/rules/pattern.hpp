// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Token-window patterns used by rule matchers.
//
// A pattern is a space-separated list of slots:
//   TAG|TAG/lemma|lemma=surface|surface   one token; the lemma and surface
//                                          filters are optional, `*` is any tag
//   ...                                    any number of tokens (lazy)
//   ^                                      start of sentence (first slot only)
//
// Example: "SUBJ_PRON|NOUN AUX|COPULA=is|are".

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dada/grammar/corpus.hpp"

namespace dada::rules {

class Pattern {
 public:
  // Throws ConfigError on unknown tags or malformed slots.
  static Pattern compile(std::string_view text);

  // Token index of every non-gap slot for the leftmost match.
  std::optional<std::vector<int>> find(const std::vector<grammar::TaggedToken>& tokens,
                                       int start = 0) const;
  // Leftmost non-overlapping matches, scanning left to right.
  std::vector<std::vector<int>> find_all(const std::vector<grammar::TaggedToken>& tokens) const;

  const std::string& text() const noexcept { return text_; }

 private:
  struct Slot {
    bool gap = false;
    bool any_tag = false;
    std::vector<grammar::Tag> tags;
    std::vector<std::string> lemmas;
    std::vector<std::string> surfaces;

    bool accepts(const grammar::TaggedToken& token) const;
  };

  bool match_from(const std::vector<grammar::TaggedToken>& tokens, std::size_t slot, int pos,
                  std::vector<int>& hits) const;

  std::string text_;
  bool anchored_ = false;
  std::vector<Slot> slots_;
};

}  // namespace dada::rules
