// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/rules/rules.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dada/common/errors.hpp"
#include "dada/common/hash.hpp"
#include "dada/grammar/lexicon.hpp"

namespace dada::rules {

namespace {

using grammar::Tag;
using Matches = std::vector<std::vector<int>>;

// Lexical substitutions; a word with several entries picks one by hashing
// (seed, sentence id, position).
const std::map<std::string, std::vector<std::string>>& lexical_table() {
  static const std::map<std::string, std::vector<std::string>> kTable = {
      {"good", {"fly"}},   {"great", {"dope"}},       {"nice", {"tight", "fresh"}},
      {"bad", {"wack"}},   {"awful", {"trash"}},      {"terrible", {"busted"}},
      {"friend", {"homie"}}, {"house", {"crib"}},     {"car", {"whip"}},
      {"job", {"gig"}},
  };
  return kTable;
}

std::string join(const std::vector<std::string>& words, char sep) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += sep;
    out += w;
  }
  return out;
}

std::string lexical_pattern() {
  std::vector<std::string> words;
  for (const auto& [word, subs] : lexical_table()) words.push_back(word);
  return "ADJ_POS|ADJ_NEG|NOUN=" + join(words, '|');
}

// Main-verb third-singular forms of the lexical verbs. "has" and "does" are
// left to been_done, got and negative_concord so that rules do not bleed each
// other.
std::string uninflect_pattern() {
  std::set<std::string> forms;
  for (const auto* list : {&grammar::lexicon::verbs(), &grammar::lexicon::relative_verbs()}) {
    for (const auto& v : *list) forms.emplace(v.third);
  }
  return "VERB=" + join({forms.begin(), forms.end()}, '|');
}

void erase_positions(std::vector<TaggedToken>& tokens, std::vector<int> positions) {
  std::sort(positions.rbegin(), positions.rend());
  for (int p : positions) tokens.erase(tokens.begin() + p);
}

void fix_article(std::vector<TaggedToken>& tokens, int noun_pos) {
  if (noun_pos == 0) return;
  TaggedToken& det = tokens[static_cast<std::size_t>(noun_pos - 1)];
  if (det.tag == Tag::kDet && (det.surface == "a" || det.surface == "an")) {
    det.surface = grammar::lexicon::takes_an(tokens[static_cast<std::size_t>(noun_pos)].surface)
                      ? "an"
                      : "a";
  }
}

std::string contracted_negative(const std::string& aux) {
  if (aux == "can") return "can't";
  if (aux == "will") return "won't";
  return "ain't";  // is
}

std::vector<Rule> build_rules() {
  std::vector<Rule> rules;

  // she has bought a camera -> she done bought a camera
  rules.emplace_back("been_done", "AUX/have=has|have VERB",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       for (const auto& hit : m) t[static_cast<std::size_t>(hit[0])].surface = "done";
                     });

  // there is a camera -> dey is a camera
  rules.emplace_back("dey_it", "EXPL_IT=there",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       for (const auto& hit : m) t[static_cast<std::size_t>(hit[0])].surface = "dey";
                     });

  // she is walking -> she walking
  rules.emplace_back("drop_aux", "SUBJ_PRON|NOUN|EXPL_IT AUX|COPULA=is|are",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       std::vector<int> drop;
                       for (const auto& hit : m) drop.push_back(hit[1]);
                       erase_positions(t, drop);
                     });

  // she has a camera -> she got a camera
  rules.emplace_back("got", "SUBJ_PRON|NOUN VERB/have=has|have",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       for (const auto& hit : m) t[static_cast<std::size_t>(hit[1])].surface = "got";
                     });

  // a good car -> a fly whip
  rules.emplace_back("lexical", lexical_pattern(),
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext& ctx) {
                       for (const auto& hit : m) {
                         const int pos = hit[0];
                         TaggedToken& tok = t[static_cast<std::size_t>(pos)];
                         const auto& subs = lexical_table().at(tok.surface);
                         std::size_t choice = 0;
                         if (subs.size() > 1) {
                           Fnv1a64 h;
                           h.update_value(ctx.seed);
                           h.update_value(ctx.sentence_id);
                           h.update_value(pos);
                           choice = static_cast<std::size_t>(h.digest() % subs.size());
                         }
                         tok.surface = subs[choice];
                         fix_article(t, pos);
                       }
                     });

  // he does not have a camera -> he don't have no camera
  rules.emplace_back("negative_concord", "NEG ... DET=a|an",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       std::vector<int> drop;
                       for (const auto& hit : m) {
                         const int neg = hit[0];
                         // Indefinites after the negation take the negative form.
                         for (std::size_t i = static_cast<std::size_t>(neg) + 1; i < t.size(); ++i) {
                           if (t[i].tag == Tag::kDet && (t[i].surface == "a" || t[i].surface == "an")) {
                             t[i].surface = "no";
                           }
                         }
                         // do-support merges with the negation: does not -> don't
                         if (neg > 0 && t[static_cast<std::size_t>(neg)].lemma == "not") {
                           TaggedToken& aux = t[static_cast<std::size_t>(neg - 1)];
                           if (aux.tag == Tag::kAux && aux.lemma == "do") {
                             TaggedToken& n = t[static_cast<std::size_t>(neg)];
                             n.surface = "don't";
                             drop.push_back(neg - 1);
                           }
                         }
                       }
                       erase_positions(t, drop);
                     });

  // nobody can buy a camera -> can't nobody buy a camera
  rules.emplace_back("negative_inversion", "^ NEG/nobody AUX=can|will|is",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       const auto& hit = m.front();
                       TaggedToken aux = t[static_cast<std::size_t>(hit[1])];
                       aux.surface = contracted_negative(aux.surface);
                       t.erase(t.begin() + hit[1]);
                       t.insert(t.begin(), std::move(aux));
                     });

  // my friend 's car -> my friend car
  rules.emplace_back("null_genetive", "NOUN POSS NOUN",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       std::vector<int> drop;
                       for (const auto& hit : m) drop.push_back(hit[1]);
                       erase_positions(t, drop);
                     });

  // a camera that she wants -> a camera she wants
  rules.emplace_back("null_relcl", "NOUN REL_PRON",
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       std::vector<int> drop;
                       for (const auto& hit : m) drop.push_back(hit[1]);
                       erase_positions(t, drop);
                     });

  // she buys a camera -> she buy a camera
  rules.emplace_back("uninflect", uninflect_pattern(),
                     [](std::vector<TaggedToken>& t, const Matches& m, const RewriteContext&) {
                       for (const auto& hit : m) {
                         TaggedToken& v = t[static_cast<std::size_t>(hit[0])];
                         v.surface = v.lemma;
                       }
                     });

  return rules;
}

const std::vector<Rule>& all_rules() {
  static const std::vector<Rule> kRules = build_rules();
  return kRules;
}

}  // namespace

Rule::Rule(std::string name, std::string_view pattern, Rewriter rewriter)
    : name_(std::move(name)), pattern_(Pattern::compile(pattern)), rewriter_(std::move(rewriter)) {}

bool Rule::matches(const std::vector<TaggedToken>& tokens) const {
  return pattern_.find(tokens).has_value();
}

std::vector<TaggedToken> Rule::rewrite(const std::vector<TaggedToken>& tokens,
                                       const RewriteContext& context) const {
  const auto matches = pattern_.find_all(tokens);
  if (matches.empty()) return tokens;
  std::vector<TaggedToken> out = tokens;
  rewriter_(out, matches, context);
  return out;
}

const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    for (const auto& r : all_rules()) names.push_back(r.name());
    std::sort(names.begin(), names.end());
    return names;
  }();
  return kNames;
}

bool is_rule_name(std::string_view name) {
  const auto& names = rule_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

const Rule& rule(std::string_view name) {
  for (const auto& r : all_rules()) {
    if (r.name() == name) return r;
  }
  throw ConfigError("unknown rule '" + std::string(name) + "'");
}

RuleResult apply_rule(const Rule& rule, const TaggedSentence& sentence, std::uint64_t seed) {
  RuleResult result{sentence, false};
  if (!rule.matches(sentence.tokens)) return result;
  result.sentence.tokens = rule.rewrite(sentence.tokens, RewriteContext{seed, sentence.id});
  if (result.sentence.tokens == sentence.tokens) {
    throw ContractError("rule '" + rule.name() + "' matched but rewrote nothing");
  }
  auto& applied = result.sentence.applied_rules;
  if (std::find(applied.begin(), applied.end(), rule.name()) == applied.end()) {
    applied.push_back(rule.name());
    std::sort(applied.begin(), applied.end());
  }
  result.applied = true;
  return result;
}

std::vector<std::string> dialect_surface_forms() {
  std::set<std::string> forms = {"done", "dey", "got", "don't", "can't", "won't", "ain't"};
  for (const auto& [word, subs] : lexical_table()) forms.insert(subs.begin(), subs.end());
  const auto sae = grammar::lexicon::sae_surface_forms();
  for (const auto& w : sae) forms.erase(w);
  return {forms.begin(), forms.end()};
}

}  // namespace dada::rules
