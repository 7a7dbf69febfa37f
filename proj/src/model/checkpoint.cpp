// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

#include "dada/common/errors.hpp"
#include "dada/common/hash.hpp"
#include "dada/model/layers.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace dada::model {

using nlohmann::json;
using Kind = CheckpointError::Kind;

namespace {

constexpr char kMagic[4] = {'D', 'A', 'D', 'A'};

json config_to_json(const ModelConfig& c) {
  return {
      {"vocab_size", c.vocab_size}, {"d_model", c.d_model},     {"n_layers", c.n_layers},
      {"n_heads", c.n_heads},       {"d_ff", c.d_ff},           {"max_len", c.max_len},
      {"n_classes", c.n_classes},   {"adapter_bottleneck", c.adapter_bottleneck},
  };
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.vocab_size = j.at("vocab_size").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.n_layers = j.at("n_layers").get<int>();
  c.n_heads = j.at("n_heads").get<int>();
  c.d_ff = j.at("d_ff").get<int>();
  c.max_len = j.at("max_len").get<int>();
  c.n_classes = j.at("n_classes").get<int>();
  c.adapter_bottleneck = j.at("adapter_bottleneck").get<int>();
  return c;
}

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace

std::string Checkpoint::adapter_hash(const std::string& name) const {
  return params.content_hash(adapter_prefix(name));
}

std::map<std::string, Shape> expected_shapes(const ModelConfig& config, Mode mode,
                                             const std::vector<std::string>& adapters) {
  Architecture{mode, adapters}.validate();
  auto out = backbone_shapes(config);
  for (const auto& name : adapters) out.merge(adapter_shapes(config, name));
  if (mode == Mode::kFusion) out.merge(fusion_shapes(config));
  return out;
}

Checkpoint initial_checkpoint(const ModelConfig& config, const Vocabulary& vocab, Mode mode,
                              const std::vector<std::string>& adapters, std::uint64_t seed) {
  Checkpoint c;
  c.config = config;
  if (c.config.vocab_size == 0) c.config.vocab_size = vocab.size();
  if (c.config.vocab_size != vocab.size()) {
    throw ConfigError("vocab_size " + std::to_string(c.config.vocab_size) +
                      " does not match vocabulary of " + std::to_string(vocab.size()));
  }
  c.mode = mode;
  c.adapters = adapters;
  c.vocab = vocab;
  Architecture{mode, adapters}.validate();
  init_backbone(c.params, c.config, seed);
  for (const auto& name : adapters) init_adapter(c.params, c.config, name, seed);
  if (mode == Mode::kFusion) init_fusion(c.params, c.config, seed);
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  const auto expected = expected_shapes(ck.config, ck.mode, ck.adapters);
  json tensors = json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, entry] : ck.params.entries()) {
    const auto it = expected.find(name);
    if (it == expected.end() || it->second != entry.value.shape()) {
      throw ContractError("save_checkpoint: tensor " + name + " does not belong to a " +
                          std::string(mode_name(ck.mode)) + " checkpoint of this config");
    }
    tensors.push_back({{"name", name}, {"shape", entry.value.shape()}, {"offset", offset}});
    offset += entry.value.size() * sizeof(float);
  }
  if (ck.params.size() != expected.size()) {
    throw ContractError("save_checkpoint: parameter set is incomplete");
  }
  json lineage = {{"backbone_hash", ck.lineage.backbone_hash},
                  {"adapter_hashes", ck.lineage.adapter_hashes}};
  const json header = {
      {"config", config_to_json(ck.config)},
      {"mode", mode_name(ck.mode)},
      {"adapters", ck.adapters},
      {"vocab", ck.vocab.tokens()},
      {"lineage", std::move(lineage)},
      {"meta", ck.meta},
      {"tensors", std::move(tensors)},
  };
  const std::string text = header.dump();

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(Kind::kIo, "cannot write " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    write_u32(out, kCheckpointVersion);
    write_u32(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& [name, entry] : ck.params.entries()) {
      out.write(reinterpret_cast<const char*>(entry.value.ptr()),
                static_cast<std::streamsize>(entry.value.size() * sizeof(float)));
    }
    if (!out) throw CheckpointError(Kind::kIo, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError(Kind::kIo, "cannot move checkpoint into " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(Kind::kIo, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0);

  char magic[4] = {};
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw CheckpointError(Kind::kBadMagic, path.string() + " is not a checkpoint");
  }
  std::uint32_t version = 0;
  std::uint32_t header_len = 0;
  if (!in.read(reinterpret_cast<char*>(&version), sizeof version)) {
    throw CheckpointError(Kind::kMalformedHeader, "missing version");
  }
  if (version != kCheckpointVersion) {
    throw CheckpointError(Kind::kVersionMismatch, "file version " + std::to_string(version) +
                                                      ", expected " + std::to_string(kCheckpointVersion));
  }
  if (!in.read(reinterpret_cast<char*>(&header_len), sizeof header_len)) {
    throw CheckpointError(Kind::kMalformedHeader, "missing header length");
  }
  const std::uint64_t payload_start = sizeof magic + 2 * sizeof(std::uint32_t) + header_len;
  if (payload_start > file_size) {
    throw CheckpointError(Kind::kMalformedHeader, "header length exceeds file size");
  }
  std::string text(header_len, '\0');
  in.read(text.data(), header_len);

  Checkpoint ck;
  struct Item {
    std::string name;
    Shape shape;
    std::uint64_t offset;
  };
  std::vector<Item> directory;
  try {
    const json header = json::parse(text);
    ck.config = config_from_json(header.at("config"));
    const auto mode = parse_mode(header.at("mode").get<std::string>());
    if (!mode) throw CheckpointError(Kind::kMalformedHeader, "unknown mode");
    ck.mode = *mode;
    ck.adapters = header.at("adapters").get<std::vector<std::string>>();
    ck.vocab = Vocabulary(header.at("vocab").get<std::vector<std::string>>());
    const json& lineage = header.at("lineage");
    ck.lineage.backbone_hash = lineage.at("backbone_hash").get<std::string>();
    ck.lineage.adapter_hashes =
        lineage.at("adapter_hashes").get<std::map<std::string, std::string>>();
    ck.meta = header.at("meta").get<std::map<std::string, std::string>>();
    for (const auto& t : header.at("tensors")) {
      directory.push_back({t.at("name").get<std::string>(), t.at("shape").get<Shape>(),
                           t.at("offset").get<std::uint64_t>()});
    }
  } catch (const json::exception& e) {
    throw CheckpointError(Kind::kMalformedHeader, e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(Kind::kMalformedHeader, e.what());
  }

  std::map<std::string, Shape> expected;
  try {
    ck.config.validate();
    expected = expected_shapes(ck.config, ck.mode, ck.adapters);
  } catch (const Error& e) {
    throw CheckpointError(Kind::kMalformedHeader, e.what());
  }
  if (ck.vocab.size() != ck.config.vocab_size) {
    throw CheckpointError(Kind::kShapeMismatch, "vocabulary size differs from config vocab_size");
  }
  if (directory.size() != expected.size()) {
    throw CheckpointError(Kind::kShapeMismatch, "tensor directory lists " +
                                                    std::to_string(directory.size()) + " tensors, config implies " +
                                                    std::to_string(expected.size()));
  }
  std::uint64_t offset = 0;
  for (const auto& item : directory) {
    const auto it = expected.find(item.name);
    if (it == expected.end()) {
      throw CheckpointError(Kind::kShapeMismatch, "unexpected tensor " + item.name);
    }
    if (it->second != item.shape) {
      throw CheckpointError(Kind::kShapeMismatch, item.name + " has shape " + shape_string(item.shape) +
                                                      ", config implies " + shape_string(it->second));
    }
    if (item.offset != offset) {
      throw CheckpointError(Kind::kMalformedHeader, "non-contiguous offset for " + item.name);
    }
    offset += shape_size(item.shape) * sizeof(float);
  }
  if (payload_start + offset > file_size) {
    throw CheckpointError(Kind::kTruncatedPayload, "expected " + std::to_string(offset) +
                                                       " payload bytes, file has " +
                                                       std::to_string(file_size - payload_start));
  }
  if (payload_start + offset < file_size) {
    throw CheckpointError(Kind::kMalformedHeader, "trailing bytes after payload");
  }

  for (const auto& item : directory) {
    Tensor t(item.shape);
    if (!in.read(reinterpret_cast<char*>(t.ptr()), static_cast<std::streamsize>(t.size() * sizeof(float)))) {
      throw CheckpointError(Kind::kTruncatedPayload, "short read in " + item.name);
    }
    ck.params.add(item.name, std::move(t), false);
  }
  return ck;
}

}  // namespace dada::model
