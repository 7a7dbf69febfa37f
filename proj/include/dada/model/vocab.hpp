// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "dada/grammar/corpus.hpp"

namespace dada::model {

// Surface form <-> id. Ids follow the order given at construction.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws ConfigError on duplicates or empty entries.
  explicit Vocabulary(std::vector<std::string> tokens);

  // Every SAE and dialect surface form, sorted.
  static Vocabulary standard();

  int size() const noexcept { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  bool contains(const std::string& surface) const { return ids_.count(surface) != 0; }
  // Throws DataError for an unknown surface form.
  int id(const std::string& surface) const;
  std::vector<int> encode(const grammar::TaggedSentence& sentence) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int> ids_;
};

}  // namespace dada::model
