// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Fusion utilization and rule-conditioned offsets.
//
// Utilization of adapter i at layer l over a set of inputs: the fusion score
// s[l][t][i] averaged over the token positions t of each input (unweighted),
// then over inputs. Offset for rule r: utilization over inputs where r fired
// minus utilization over the whole dataset, so positive means the adapter is
// used more than average on that rule's inputs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dada/grammar/corpus.hpp"
#include "dada/model/checkpoint.hpp"

namespace dada::analysis {

// Fusion scores of one input: one [T, N] tensor per layer.
struct FusionTrace {
  std::int64_t id = 0;
  std::vector<Tensor> layers;
};

struct UtilizationMatrix {
  int n_layers = 0;
  std::vector<std::string> adapters;
  std::string conditioning = "dataset";
  int n_inputs = 0;
  std::vector<double> values;  // [layer][adapter], row-major

  double at(int layer, int adapter) const {
    return values[static_cast<std::size_t>(layer) * adapters.size() + static_cast<std::size_t>(adapter)];
  }
};

struct OffsetMatrix {
  std::string rule;
  int n_layers = 0;
  std::vector<std::string> adapters;
  int n_rule_inputs = 0;
  std::vector<double> values;  // [layer][adapter]

  double at(int layer, int adapter) const {
    return values[static_cast<std::size_t>(layer) * adapters.size() + static_cast<std::size_t>(adapter)];
  }
};

// Runs the fusion model and records every layer's scores. Throws ModeError
// for a non-fusion checkpoint.
std::vector<FusionTrace> trace_fusion(const model::Checkpoint& checkpoint,
                                      const std::vector<grammar::TaggedSentence>& sentences);

// Averages traces whose id is in `ids` (all traces when ids is empty is NOT
// implied: pass every id). Throws DataError when no trace is selected.
UtilizationMatrix utilization_from_traces(const std::vector<FusionTrace>& traces,
                                          const std::vector<std::string>& adapters,
                                          const std::vector<std::int64_t>& ids,
                                          const std::string& conditioning = "dataset");

UtilizationMatrix utilization_matrix(const model::Checkpoint& checkpoint,
                                     const std::vector<grammar::TaggedSentence>& sentences);

// Throws ConditioningError when the rule fired on no sentence.
OffsetMatrix offset_from_traces(const std::vector<FusionTrace>& traces,
                                const std::vector<grammar::TaggedSentence>& sentences,
                                const std::vector<std::string>& adapters, const std::string& rule);

OffsetMatrix offset_matrix(const model::Checkpoint& checkpoint,
                           const std::vector<grammar::TaggedSentence>& sentences, const std::string& rule);

// CSV with a leading '#' line stating the sign convention, then
// `layer,adapter,rule,offset`, one row per cell ordered by rule, layer,
// adapter. Throws ArgumentError when matrices disagree in shape and
// DataError when the file cannot be written.
void export_correlations(const std::vector<OffsetMatrix>& matrices, const std::filesystem::path& path);

// `layer,adapter,utilization`, ordered by layer then bank order.
void write_utilization(const UtilizationMatrix& matrix, const std::filesystem::path& path);

// One line per (input, layer): {"id":..,"layer":..,"scores":[[..]..]}.
void write_traces(const std::filesystem::path& path, const std::vector<FusionTrace>& traces);
std::vector<FusionTrace> read_traces(const std::filesystem::path& path);

// Where the rule's own adapter stands in the lower half of the layers.
struct RuleAttribution {
  std::string rule;
  double lower_offset = 0.0;  // mean offset of the matching adapter over layers [0, L/2)
  int rank = 0;               // 1 = largest mean lower-layer offset among all adapters
  bool positive_top3() const { return lower_offset > 0.0 && rank <= 3; }
};

RuleAttribution attribute(const OffsetMatrix& offsets);

}  // namespace dada::analysis
