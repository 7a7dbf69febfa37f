// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/analysis/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <set>

#include "dada/common/errors.hpp"
#include "dada/model/model.hpp"

namespace dada::analysis {

using nlohmann::json;

namespace {

constexpr int kTraceBatch = 256;

}  // namespace

std::vector<FusionTrace> trace_fusion(const model::Checkpoint& ck,
                                      const std::vector<grammar::TaggedSentence>& sentences) {
  if (ck.mode != model::Mode::kFusion) {
    throw ModeError("fusion analysis needs a fusion checkpoint, got " +
                    std::string(model::mode_name(ck.mode)));
  }
  std::vector<FusionTrace> out;
  out.reserve(sentences.size());
  const auto arch = ck.architecture();
  for (std::size_t begin = 0; begin < sentences.size(); begin += kTraceBatch) {
    const std::size_t end = std::min(sentences.size(), begin + kTraceBatch);
    std::vector<std::vector<int>> ids;
    for (std::size_t i = begin; i < end; ++i) ids.push_back(ck.vocab.encode(sentences[i]));
    std::vector<std::span<const int>> seqs(ids.begin(), ids.end());
    const auto batch = model::make_batch(seqs, {}, ck.config.max_len);
    Tape<float> tape(false);
    const auto vars = model::forward(tape, ck.params, ck.config, arch, batch);
    for (int b = 0; b < batch.size(); ++b) {
      FusionTrace trace;
      trace.id = sentences[begin + static_cast<std::size_t>(b)].id;
      const auto& seg = batch.segments[static_cast<std::size_t>(b)];
      for (Var s : vars.fusion_scores) {
        const Tensor& scores = tape.value(s);
        const int n = scores.dim(1);
        std::vector<float> rows(scores.ptr() + static_cast<std::size_t>(seg.offset) * n,
                                scores.ptr() + static_cast<std::size_t>(seg.offset + seg.length) * n);
        trace.layers.emplace_back(Shape{seg.length, n}, std::move(rows));
      }
      out.push_back(std::move(trace));
    }
  }
  return out;
}

UtilizationMatrix utilization_from_traces(const std::vector<FusionTrace>& traces,
                                          const std::vector<std::string>& adapters,
                                          const std::vector<std::int64_t>& ids,
                                          const std::string& conditioning) {
  const std::set<std::int64_t> wanted(ids.begin(), ids.end());
  UtilizationMatrix m;
  m.adapters = adapters;
  m.conditioning = conditioning;
  const std::size_t n = adapters.size();
  for (const auto& trace : traces) {
    if (!wanted.count(trace.id)) continue;
    if (m.n_inputs == 0) {
      m.n_layers = static_cast<int>(trace.layers.size());
      m.values.assign(static_cast<std::size_t>(m.n_layers) * n, 0.0);
    }
    if (static_cast<int>(trace.layers.size()) != m.n_layers) {
      throw ArgumentError("traces disagree on the number of layers");
    }
    for (int l = 0; l < m.n_layers; ++l) {
      const Tensor& s = trace.layers[static_cast<std::size_t>(l)];
      if (s.dim(1) != static_cast<int>(n)) throw ArgumentError("trace width does not match the bank");
      const int positions = s.dim(0);
      for (std::size_t i = 0; i < n; ++i) {
        double per_input = 0.0;
        for (int t = 0; t < positions; ++t) per_input += s.at(t, static_cast<int>(i));
        m.values[static_cast<std::size_t>(l) * n + i] += per_input / positions;
      }
    }
    ++m.n_inputs;
  }
  if (m.n_inputs == 0) throw DataError("utilization over an empty selection");
  for (double& v : m.values) v /= m.n_inputs;
  return m;
}

UtilizationMatrix utilization_matrix(const model::Checkpoint& ck,
                                     const std::vector<grammar::TaggedSentence>& sentences) {
  if (ck.mode != model::Mode::kFusion) {
    throw ModeError("utilization needs a fusion checkpoint, got " + std::string(model::mode_name(ck.mode)));
  }
  if (sentences.empty()) throw DataError("utilization over an empty corpus");
  const auto traces = trace_fusion(ck, sentences);
  std::vector<std::int64_t> ids;
  for (const auto& t : traces) ids.push_back(t.id);
  return utilization_from_traces(traces, ck.adapters, ids);
}

OffsetMatrix offset_from_traces(const std::vector<FusionTrace>& traces,
                                const std::vector<grammar::TaggedSentence>& sentences,
                                const std::vector<std::string>& adapters, const std::string& rule) {
  std::vector<std::int64_t> all_ids;
  std::vector<std::int64_t> rule_ids;
  for (const auto& s : sentences) {
    all_ids.push_back(s.id);
    if (std::find(s.applied_rules.begin(), s.applied_rules.end(), rule) != s.applied_rules.end()) {
      rule_ids.push_back(s.id);
    }
  }
  if (rule_ids.empty()) throw ConditioningError("rule '" + rule + "' never applied in the corpus");
  const auto base = utilization_from_traces(traces, adapters, all_ids);
  const auto cond = utilization_from_traces(traces, adapters, rule_ids, rule);
  OffsetMatrix out;
  out.rule = rule;
  out.n_layers = base.n_layers;
  out.adapters = adapters;
  out.n_rule_inputs = cond.n_inputs;
  out.values.resize(base.values.size());
  for (std::size_t i = 0; i < base.values.size(); ++i) out.values[i] = cond.values[i] - base.values[i];
  return out;
}

OffsetMatrix offset_matrix(const model::Checkpoint& ck,
                           const std::vector<grammar::TaggedSentence>& sentences, const std::string& rule) {
  if (ck.mode != model::Mode::kFusion) {
    throw ModeError("offsets need a fusion checkpoint, got " + std::string(model::mode_name(ck.mode)));
  }
  const bool any = std::any_of(sentences.begin(), sentences.end(), [&](const auto& s) {
    return std::find(s.applied_rules.begin(), s.applied_rules.end(), rule) != s.applied_rules.end();
  });
  if (!any) throw ConditioningError("rule '" + rule + "' never applied in the corpus");
  return offset_from_traces(trace_fusion(ck, sentences), sentences, ck.adapters, rule);
}

void export_correlations(const std::vector<OffsetMatrix>& matrices, const std::filesystem::path& path) {
  for (const auto& m : matrices) {
    if (m.n_layers != matrices.front().n_layers || m.adapters != matrices.front().adapters) {
      throw ArgumentError("offset matrices do not share layer/adapter dimensions");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# offset = rule-conditioned mean utilization minus dataset mean (positive = used more on the rule's inputs)\n";
  out << "layer,adapter,rule,offset\n";
  char number[64];
  for (const auto& m : matrices) {
    for (int l = 0; l < m.n_layers; ++l) {
      for (std::size_t i = 0; i < m.adapters.size(); ++i) {
        std::snprintf(number, sizeof number, "%.9g", m.at(l, static_cast<int>(i)));
        out << l << ',' << m.adapters[i] << ',' << m.rule << ',' << number << '\n';
      }
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void write_utilization(const UtilizationMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << "layer,adapter,utilization\n";
  char number[64];
  for (int l = 0; l < m.n_layers; ++l) {
    for (std::size_t i = 0; i < m.adapters.size(); ++i) {
      std::snprintf(number, sizeof number, "%.9g", m.at(l, static_cast<int>(i)));
      out << l << ',' << m.adapters[i] << ',' << number << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

void write_traces(const std::filesystem::path& path, const std::vector<FusionTrace>& traces) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& trace : traces) {
    for (std::size_t l = 0; l < trace.layers.size(); ++l) {
      const Tensor& s = trace.layers[l];
      json rows = json::array();
      for (int t = 0; t < s.dim(0); ++t) {
        const auto row = s.row(t);
        rows.push_back(std::vector<float>(row.begin(), row.end()));
      }
      out << json{{"id", trace.id}, {"layer", l}, {"scores", std::move(rows)}}.dump() << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<FusionTrace> read_traces(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::vector<FusionTrace> out;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto id = j.at("id").get<std::int64_t>();
      const auto layer = j.at("layer").get<std::size_t>();
      const auto rows = j.at("scores").get<std::vector<std::vector<float>>>();
      if (rows.empty()) throw DataError("trace without positions");
      std::vector<float> flat;
      for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
      if (out.empty() || out.back().id != id) out.push_back(FusionTrace{id, {}});
      if (out.back().layers.size() != layer) throw DataError("trace layers out of order");
      out.back().layers.emplace_back(Shape{static_cast<int>(rows.size()), static_cast<int>(rows.front().size())},
                                     std::move(flat));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed trace record: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DataError(std::string("malformed trace record: ") + e.what());
  }
  return out;
}

RuleAttribution attribute(const OffsetMatrix& offsets) {
  const auto it = std::find(offsets.adapters.begin(), offsets.adapters.end(), offsets.rule);
  if (it == offsets.adapters.end()) {
    throw ArgumentError("no adapter named '" + offsets.rule + "' in the bank");
  }
  const int lower = std::max(1, offsets.n_layers / 2);
  std::vector<double> mean(offsets.adapters.size(), 0.0);
  for (std::size_t i = 0; i < mean.size(); ++i) {
    for (int l = 0; l < lower; ++l) mean[i] += offsets.at(l, static_cast<int>(i));
    mean[i] /= lower;
  }
  const auto own = static_cast<std::size_t>(it - offsets.adapters.begin());
  RuleAttribution a;
  a.rule = offsets.rule;
  a.lower_offset = mean[own];
  a.rank = 1 + static_cast<int>(std::count_if(mean.begin(), mean.end(), [&](double v) { return v > mean[own]; }));
  return a;
}

}  // namespace dada::analysis
