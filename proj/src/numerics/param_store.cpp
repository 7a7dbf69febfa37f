// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/param_store.hpp"

#include "dada/common/errors.hpp"
#include "dada/common/hash.hpp"

namespace dada {

template <class T>
void BasicParamStore<T>::add(const std::string& path, BasicTensor<T> value, bool trainable) {
  if (path.empty()) throw ContractError("parameter path must be non-empty");
  if (!entries_.emplace(path, Entry{std::move(value), trainable}).second) {
    throw ContractError("duplicate parameter path: " + path);
  }
}

template <class T>
const BasicTensor<T>& BasicParamStore<T>::get(const std::string& path) const {
  const auto it = entries_.find(path);
  if (it == entries_.end()) throw ContractError("unknown parameter path: " + path);
  return it->second.value;
}

template <class T>
BasicTensor<T>& BasicParamStore<T>::mutable_value(const std::string& path) {
  const auto it = entries_.find(path);
  if (it == entries_.end()) throw ContractError("unknown parameter path: " + path);
  return it->second.value;
}

template <class T>
bool BasicParamStore<T>::trainable(const std::string& path) const {
  const auto it = entries_.find(path);
  if (it == entries_.end()) throw ContractError("unknown parameter path: " + path);
  return it->second.trainable;
}

template <class T>
void BasicParamStore<T>::set_trainable(const std::string& path, bool trainable) {
  const auto it = entries_.find(path);
  if (it == entries_.end()) throw ContractError("unknown parameter path: " + path);
  it->second.trainable = trainable;
}

template <class T>
std::size_t BasicParamStore<T>::set_trainable_prefix(std::string_view prefix, bool trainable) {
  std::size_t count = 0;
  for (auto& [path, e] : entries_) {
    if (std::string_view(path).substr(0, prefix.size()) == prefix) {
      e.trainable = trainable;
      ++count;
    }
  }
  return count;
}

template <class T>
void BasicParamStore<T>::set_all_trainable(bool trainable) {
  for (auto& [path, e] : entries_) e.trainable = trainable;
}

template <class T>
std::vector<std::string> BasicParamStore<T>::paths() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [path, e] : entries_) out.push_back(path);
  return out;
}

template <class T>
std::vector<std::string> BasicParamStore<T>::paths_with_prefix(std::string_view prefix) const {
  std::vector<std::string> out;
  for (const auto& [path, e] : entries_) {
    if (std::string_view(path).substr(0, prefix.size()) == prefix) out.push_back(path);
  }
  return out;
}

template <class T>
std::vector<std::string> BasicParamStore<T>::trainable_paths() const {
  std::vector<std::string> out;
  for (const auto& [path, e] : entries_) {
    if (e.trainable) out.push_back(path);
  }
  return out;
}

template <class T>
std::size_t BasicParamStore<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [path, e] : entries_) n += e.value.size();
  return n;
}

template <class T>
std::string BasicParamStore<T>::content_hash(std::string_view prefix) const {
  Fnv1a64 h;
  for (const auto& [path, e] : entries_) {
    if (std::string_view(path).substr(0, prefix.size()) != prefix) continue;
    h.update(path);
    h.update(shape_string(e.value.shape()));
    h.update(std::as_bytes(e.value.data()));
  }
  return h.hex();
}

template <class T>
void BasicParamStore<T>::merge(const BasicParamStore& other) {
  for (const auto& [path, e] : other.entries_) add(path, e.value, e.trainable);
}

template class BasicParamStore<float>;
template class BasicParamStore<double>;

}  // namespace dada
