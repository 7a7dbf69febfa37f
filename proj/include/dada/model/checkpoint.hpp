// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Binary checkpoint:
//   "DADA" | u32 version | u32 header length | JSON header | f32 payloads
// All integers and floats little-endian. The header holds the model config,
// mode, adapter order, vocabulary, lineage, free-form metadata and a tensor
// directory (name, shape, byte offset into the payload area).

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dada/model/config.hpp"
#include "dada/model/model.hpp"
#include "dada/model/vocab.hpp"
#include "dada/numerics/param_store.hpp"

namespace dada::model {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Content hashes of the parameter sets a checkpoint was built from.
struct Lineage {
  std::string backbone_hash;
  std::map<std::string, std::string> adapter_hashes;

  friend bool operator==(const Lineage&, const Lineage&) = default;
};

struct Checkpoint {
  ModelConfig config;
  Mode mode = Mode::kBackbone;
  std::vector<std::string> adapters;
  Vocabulary vocab;
  ParamStore params;
  Lineage lineage;
  std::map<std::string, std::string> meta;

  Architecture architecture() const { return {mode, adapters}; }
  std::string backbone_hash() const { return params.content_hash("backbone."); }
  // Hash of one adapter's tensors; the null adapter hashes the empty set.
  std::string adapter_hash(const std::string& name) const;
};

// Every tensor a checkpoint of this shape must contain.
std::map<std::string, Shape> expected_shapes(const ModelConfig& config, Mode mode,
                                             const std::vector<std::string>& adapters);

// Fresh model: backbone from `seed`; adapters and fusion initialised as the
// mode requires.
Checkpoint initial_checkpoint(const ModelConfig& config, const Vocabulary& vocab, Mode mode,
                              const std::vector<std::string>& adapters, std::uint64_t seed);

// Writes to a temporary file and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

// Validates magic, version, header and tensor directory before reading any
// payload; throws CheckpointError with a distinct kind per failure. Loaded
// parameters are marked non-trainable.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dada::model
