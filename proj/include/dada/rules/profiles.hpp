// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dada/grammar/corpus.hpp"

namespace dada::rules {

struct DialectProfile {
  std::string name;
  // Rule names in application order (lexicographic).
  std::vector<std::string> rules;
};

// Named profiles read from text, one per line:
//   AppE: been_done,got,negative_concord,uninflect
// Blank lines and '#' comments are skipped. Rule lists are sorted on load.
// Unknown rules, duplicate profiles and a Multi profile that does not list
// every rule are ConfigErrors.
class ProfileTable {
 public:
  static ProfileTable parse(const std::string& text, const std::string& origin = "<string>");
  static ProfileTable load(const std::filesystem::path& path);
  // The built-in table (same content as configs/profiles.txt).
  static const ProfileTable& defaults();
  static const std::string& default_text();

  const DialectProfile& get(const std::string& name) const;
  bool contains(const std::string& name) const { return profiles_.count(name) != 0; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, DialectProfile> profiles_;
};

// The Multi profile: every rule.
DialectProfile multi_profile();

// Applies the profile's rules in order; the result's applied_rules lists the
// rules that fired.
grammar::TaggedSentence apply_profile(const DialectProfile& profile,
                                      const grammar::TaggedSentence& sentence, std::uint64_t seed);

}  // namespace dada::rules
