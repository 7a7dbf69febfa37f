// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

// Record of one mutating command: what went in, what came out, and the
// resolved settings. Replaying the command reproduces the output hashes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace dada::cli {

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> content hash
  std::map<std::string, std::string> outputs;  // path -> content hash
  std::map<std::string, double> metrics;
  double wall_seconds = 0.0;

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

// Atomic: written to a sibling temporary and renamed into place.
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace dada::cli
