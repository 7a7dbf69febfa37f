// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#include "dada/numerics/tape.hpp"

#include "dada/common/errors.hpp"

namespace dada {

template <class T>
Var Tape<T>::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

template <class T>
Var Tape<T>::constant(BasicTensor<T> value) {
  return push(Node{std::move(value), {}, false, {}, {}});
}

template <class T>
Var Tape<T>::leaf(BasicTensor<T> value, bool requires_grad) {
  return push(Node{std::move(value), {}, record_ && requires_grad, {}, {}});
}

template <class T>
Var Tape<T>::param(const BasicParamStore<T>& store, const std::string& path) {
  if (const auto it = param_nodes_.find(path); it != param_nodes_.end()) {
    return Var{it->second};
  }
  Node node{store.get(path), {}, record_ && store.trainable(path), {}, path};
  const Var v = push(std::move(node));
  param_nodes_.emplace(path, v.id);
  return v;
}

template <class T>
Var Tape<T>::record(BasicTensor<T> value, std::initializer_list<Var> inputs, Backward backward) {
  bool needs = false;
  if (record_) {
    for (Var in : inputs) needs = needs || requires_grad(in);
  }
  return push(Node{std::move(value), {}, needs, needs ? std::move(backward) : Backward{}, {}});
}

template <class T>
Var Tape<T>::record(BasicTensor<T> value, const std::vector<Var>& inputs, Backward backward) {
  bool needs = false;
  if (record_) {
    for (Var in : inputs) needs = needs || requires_grad(in);
  }
  return push(Node{std::move(value), {}, needs, needs ? std::move(backward) : Backward{}, {}});
}

template <class T>
BasicTensor<T>& Tape<T>::grad(Var v) {
  Node& node = nodes_.at(static_cast<std::size_t>(v.id));
  if (node.grad.empty()) node.grad = BasicTensor<T>(node.value.shape());
  return node.grad;
}

template <class T>
GradMap<T> Tape<T>::backward(Var loss) {
  if (!loss.valid() || static_cast<std::size_t>(loss.id) >= nodes_.size()) {
    throw ContractError("backward: invalid loss handle");
  }
  if (value(loss).size() != 1) {
    throw ContractError("backward: loss must be scalar, got shape " +
                        shape_string(value(loss).shape()));
  }
  GradMap<T> out;
  if (!requires_grad(loss)) return out;

  grad(loss)[0] = T{1};
  for (int id = loss.id; id >= 0; --id) {
    Node& node = nodes_[static_cast<std::size_t>(id)];
    if (!node.requires_grad || node.grad.empty() || !node.backward) continue;
    // The closure may grow other nodes' grad buffers but never appends nodes.
    node.backward(*this, Var{id});
  }
  for (const auto& [path, id] : param_nodes_) {
    Node& node = nodes_[static_cast<std::size_t>(id)];
    if (!node.requires_grad) continue;
    out.emplace(path, node.grad.empty() ? BasicTensor<T>(node.value.shape()) : node.grad);
  }
  return out;
}

template class Tape<float>;
template class Tape<double>;

}  // namespace dada
