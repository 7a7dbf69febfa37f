// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/rules/pattern.hpp"

#include <algorithm>
#include <sstream>

#include "dada/common/errors.hpp"

namespace dada::rules {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    out.emplace_back(text.substr(begin, end == std::string_view::npos ? end : end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

template <class T>
bool contains(const std::vector<T>& items, const T& value) {
  return std::find(items.begin(), items.end(), value) != items.end();
}

}  // namespace

bool Pattern::Slot::accepts(const grammar::TaggedToken& token) const {
  if (!any_tag && !contains(tags, token.tag)) return false;
  if (!lemmas.empty() && !contains(lemmas, token.lemma)) return false;
  if (!surfaces.empty() && !contains(surfaces, token.surface)) return false;
  return true;
}

Pattern Pattern::compile(std::string_view text) {
  Pattern p;
  p.text_ = std::string(text);
  std::istringstream in{std::string(text)};
  std::string word;
  bool first = true;
  while (in >> word) {
    if (word == "^") {
      if (!first) throw ConfigError("pattern '" + p.text_ + "': '^' must come first");
      p.anchored_ = true;
      first = false;
      continue;
    }
    first = false;
    Slot slot;
    if (word == "...") {
      slot.gap = true;
      p.slots_.push_back(std::move(slot));
      continue;
    }
    std::string tags = word;
    if (const auto eq = tags.find('='); eq != std::string::npos) {
      slot.surfaces = split(std::string_view(tags).substr(eq + 1), '|');
      tags.resize(eq);
    }
    if (const auto slash = tags.find('/'); slash != std::string::npos) {
      slot.lemmas = split(std::string_view(tags).substr(slash + 1), '|');
      tags.resize(slash);
    }
    if (tags == "*") {
      slot.any_tag = true;
    } else {
      for (const std::string& name : split(tags, '|')) {
        const auto tag = grammar::parse_tag(name);
        if (!tag) throw ConfigError("pattern '" + p.text_ + "': unknown tag '" + name + "'");
        slot.tags.push_back(*tag);
      }
    }
    for (const auto* list : {&slot.lemmas, &slot.surfaces}) {
      for (const auto& w : *list) {
        if (w.empty()) throw ConfigError("pattern '" + p.text_ + "': empty alternative");
      }
    }
    p.slots_.push_back(std::move(slot));
  }
  if (p.slots_.empty() || std::all_of(p.slots_.begin(), p.slots_.end(),
                                      [](const Slot& s) { return s.gap; })) {
    throw ConfigError("pattern '" + p.text_ + "' has no token slots");
  }
  return p;
}

bool Pattern::match_from(const std::vector<grammar::TaggedToken>& tokens, std::size_t slot,
                         int pos, std::vector<int>& hits) const {
  if (slot == slots_.size()) return true;
  const Slot& s = slots_[slot];
  if (s.gap) {
    for (int p = pos; p <= static_cast<int>(tokens.size()); ++p) {
      if (match_from(tokens, slot + 1, p, hits)) return true;
    }
    return false;
  }
  if (pos >= static_cast<int>(tokens.size())) return false;
  if (!s.accepts(tokens[static_cast<std::size_t>(pos)])) return false;
  hits.push_back(pos);
  if (match_from(tokens, slot + 1, pos + 1, hits)) return true;
  hits.pop_back();
  return false;
}

std::optional<std::vector<int>> Pattern::find(const std::vector<grammar::TaggedToken>& tokens,
                                              int start) const {
  const int last = anchored_ ? std::min(start, 0) : static_cast<int>(tokens.size()) - 1;
  for (int pos = start; pos <= last; ++pos) {
    std::vector<int> hits;
    if (match_from(tokens, 0, pos, hits)) return hits;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> Pattern::find_all(
    const std::vector<grammar::TaggedToken>& tokens) const {
  std::vector<std::vector<int>> out;
  int start = 0;
  while (auto hits = find(tokens, start)) {
    start = hits->back() + 1;
    out.push_back(std::move(*hits));
  }
  return out;
}

}  // namespace dada::rules
