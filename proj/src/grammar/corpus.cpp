// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/grammar/corpus.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "dada/common/errors.hpp"

namespace dada::grammar {

using nlohmann::json;

std::string TaggedSentence::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Label semantic_label(const std::vector<TaggedToken>& tokens) {
  std::optional<Sentiment> sentiment;
  int negations = 0;
  for (const auto& t : tokens) {
    if (!sentiment) sentiment = lexicon::adjective_sentiment(t.lemma);
    if (lexicon::is_negation_lemma(t.lemma)) ++negations;
  }
  return label_of(sentiment.value_or(Sentiment::kNeutral), negations % 2);
}

std::string to_json_line(const TaggedSentence& sentence) {
  json tokens = json::array();
  for (const auto& t : sentence.tokens) {
    tokens.push_back({{"surface", t.surface}, {"tag", tag_name(t.tag)}, {"lemma", t.lemma}});
  }
  json record = {
      {"id", sentence.id},
      {"tokens", std::move(tokens)},
      {"label", label_name(sentence.label)},
      {"applied_rules", sentence.applied_rules},
  };
  return record.dump();
}

TaggedSentence from_json_line(const std::string& line) {
  try {
    const json record = json::parse(line);
    TaggedSentence s;
    s.id = record.at("id").get<std::int64_t>();
    for (const auto& t : record.at("tokens")) {
      TaggedToken token;
      token.surface = t.at("surface").get<std::string>();
      const auto tag = parse_tag(t.at("tag").get<std::string>());
      if (!tag) throw DataError("unknown tag '" + t.at("tag").get<std::string>() + "'");
      token.tag = *tag;
      token.lemma = t.at("lemma").get<std::string>();
      if (token.surface.empty()) throw DataError("empty token surface");
      s.tokens.push_back(std::move(token));
    }
    const auto label = parse_label(record.at("label").get<std::string>());
    if (!label) throw DataError("unknown label '" + record.at("label").get<std::string>() + "'");
    s.label = *label;
    if (record.contains("applied_rules")) {
      s.applied_rules = record.at("applied_rules").get<std::vector<std::string>>();
    }
    if (s.tokens.empty()) throw DataError("sentence without tokens");
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed corpus record: ") + e.what());
  }
}

void write_jsonl(const std::filesystem::path& path, const std::vector<TaggedSentence>& sentences) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& s : sentences) out << to_json_line(s) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<TaggedSentence> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<TaggedSentence> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(from_json_line(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace dada::grammar
