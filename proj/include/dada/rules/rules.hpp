// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// The ten AAVE transformation rules. Each rule is a compiled token pattern
// plus a rewriter; see docs/rules.md for the per-rule table.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dada/grammar/corpus.hpp"
#include "dada/rules/pattern.hpp"

namespace dada::rules {

using grammar::TaggedSentence;
using grammar::TaggedToken;

struct RewriteContext {
  std::uint64_t seed = 0;
  std::int64_t sentence_id = 0;
};

class Rule {
 public:
  // Receives the tokens and all pattern matches (non-empty) and edits in place.
  using Rewriter = std::function<void(std::vector<TaggedToken>& tokens,
                                      const std::vector<std::vector<int>>& matches,
                                      const RewriteContext& context)>;

  // Throws ConfigError if the pattern does not compile.
  Rule(std::string name, std::string_view pattern, Rewriter rewriter);

  const std::string& name() const noexcept { return name_; }
  const Pattern& pattern() const noexcept { return pattern_; }

  bool matches(const std::vector<TaggedToken>& tokens) const;
  // Rewritten tokens; the input unchanged when the pattern does not match.
  std::vector<TaggedToken> rewrite(const std::vector<TaggedToken>& tokens,
                                   const RewriteContext& context) const;

 private:
  std::string name_;
  Pattern pattern_;
  Rewriter rewriter_;
};

// Names of the implemented rules in application order (lexicographic).
const std::vector<std::string>& rule_names();

// Throws ConfigError for an unknown name.
const Rule& rule(std::string_view name);
bool is_rule_name(std::string_view name);

struct RuleResult {
  TaggedSentence sentence;
  bool applied = false;
};

// Applies one rule. When it fires the rule name is added to applied_rules and
// the label is carried over; otherwise the sentence comes back unchanged.
// `seed` only influences rules with several equivalent rewrites (lexical).
RuleResult apply_rule(const Rule& rule, const TaggedSentence& sentence, std::uint64_t seed = 0);

// Surface forms introduced by the rules and absent from the SAE grammar.
std::vector<std::string> dialect_surface_forms();

}  // namespace dada::rules
