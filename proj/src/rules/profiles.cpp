// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/rules/profiles.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dada/common/errors.hpp"
#include "dada/rules/rules.hpp"

namespace dada::rules {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

ProfileTable ProfileTable::parse(const std::string& text, const std::string& origin) {
  ProfileTable table;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = origin + ":" + std::to_string(number);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ConfigError(where + ": expected 'name: rule,...'");
    DialectProfile profile;
    profile.name = trim(line.substr(0, colon));
    if (profile.name.empty()) throw ConfigError(where + ": empty profile name");
    std::istringstream list(line.substr(colon + 1));
    std::string item;
    while (std::getline(list, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      if (!is_rule_name(item)) throw ConfigError(where + ": unknown rule '" + item + "'");
      if (std::find(profile.rules.begin(), profile.rules.end(), item) != profile.rules.end()) {
        throw ConfigError(where + ": rule '" + item + "' listed twice");
      }
      profile.rules.push_back(item);
    }
    std::sort(profile.rules.begin(), profile.rules.end());
    if (profile.name == "Multi" && profile.rules != rule_names()) {
      throw ConfigError(where + ": the Multi profile must list every rule");
    }
    const std::string name = profile.name;
    if (!table.profiles_.emplace(name, std::move(profile)).second) {
      throw ConfigError(where + ": profile '" + name + "' defined twice");
    }
  }
  return table;
}

ProfileTable ProfileTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read profile file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

const std::string& ProfileTable::default_text() {
  static const std::string kText =
      "# Dialect profiles as subsets of the implemented rules.\n"
      "AAVE: been_done,dey_it,drop_aux,got,lexical,negative_concord,negative_inversion,"
      "null_genetive,null_relcl,uninflect\n"
      "AppE: been_done,got,negative_concord,uninflect\n"
      "ChcE: drop_aux,negative_concord,null_genetive,uninflect\n"
      "CollSgE: drop_aux,got,lexical,null_genetive,uninflect\n"
      "IndE: drop_aux,lexical,null_relcl,uninflect\n"
      "Multi: been_done,dey_it,drop_aux,got,lexical,negative_concord,negative_inversion,"
      "null_genetive,null_relcl,uninflect\n";
  return kText;
}

const ProfileTable& ProfileTable::defaults() {
  static const ProfileTable kTable = parse(default_text(), "<builtin profiles>");
  return kTable;
}

const DialectProfile& ProfileTable::get(const std::string& name) const {
  const auto it = profiles_.find(name);
  if (it == profiles_.end()) throw ConfigError("unknown profile '" + name + "'");
  return it->second;
}

std::vector<std::string> ProfileTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : profiles_) out.push_back(name);
  return out;
}

DialectProfile multi_profile() { return DialectProfile{"Multi", rule_names()}; }

grammar::TaggedSentence apply_profile(const DialectProfile& profile,
                                      const grammar::TaggedSentence& sentence, std::uint64_t seed) {
  grammar::TaggedSentence current = sentence;
  for (const auto& name : profile.rules) {
    current = apply_rule(rule(name), current, seed).sentence;
  }
  return current;
}

}  // namespace dada::rules
