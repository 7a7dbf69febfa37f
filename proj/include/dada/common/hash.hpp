// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace dada {

// Incremental 64-bit FNV-1a. Used for content hashes of parameters,
// checkpoints and run artifacts; not a cryptographic hash.
class Fnv1a64 {
 public:
  void update(std::span<const std::byte> bytes) noexcept;
  void update(std::string_view text) noexcept;
  template <class T>
  void update_value(const T& value) noexcept {
    update(std::as_bytes(std::span<const T, 1>(&value, 1)));
  }
  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t value);

// Hash of a file's bytes, as 16 lowercase hex digits.
std::string file_hash(const std::filesystem::path& path);

}  // namespace dada
