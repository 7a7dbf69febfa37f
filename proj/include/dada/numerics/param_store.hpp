// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dada/numerics/tensor.hpp"

namespace dada {

// Named parameters keyed by dotted path ("backbone.layer0.attn.wq"), each with
// a trainable flag. Iteration order is lexicographic by path.
template <class T>
class BasicParamStore {
 public:
  struct Entry {
    BasicTensor<T> value;
    bool trainable = true;
  };

  // Throws ContractError if the path already exists.
  void add(const std::string& path, BasicTensor<T> value, bool trainable = true);

  bool contains(const std::string& path) const { return entries_.count(path) != 0; }
  std::size_t size() const noexcept { return entries_.size(); }

  const BasicTensor<T>& get(const std::string& path) const;
  BasicTensor<T>& mutable_value(const std::string& path);

  bool trainable(const std::string& path) const;
  void set_trainable(const std::string& path, bool trainable);
  // Sets the flag on every path that starts with `prefix`; returns the count.
  std::size_t set_trainable_prefix(std::string_view prefix, bool trainable);
  void set_all_trainable(bool trainable);

  std::vector<std::string> paths() const;
  std::vector<std::string> paths_with_prefix(std::string_view prefix) const;
  std::vector<std::string> trainable_paths() const;
  std::size_t parameter_count() const;

  // FNV-1a over (path, shape, raw bytes) of every entry whose path starts with
  // `prefix`. Used to audit frozen parameter sets.
  std::string content_hash(std::string_view prefix = {}) const;

  // Moves every entry of `other` into this store; duplicate paths are an error.
  void merge(const BasicParamStore& other);

  template <class U>
  BasicParamStore<U> cast() const {
    BasicParamStore<U> out;
    for (const auto& [path, e] : entries_) out.add(path, e.value.template cast<U>(), e.trainable);
    return out;
  }

  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, Entry> entries_;
};

using ParamStore = BasicParamStore<float>;

template <class T>
using GradMap = std::map<std::string, BasicTensor<T>>;

}  // namespace dada
