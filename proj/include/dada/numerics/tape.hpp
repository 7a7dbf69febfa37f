// Copyright 2026 The dada Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dada/numerics/param_store.hpp"
#include "dada/numerics/tensor.hpp"

namespace dada {

// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
  bool valid() const noexcept { return id >= 0; }
};

// Reverse-mode autodiff tape. Every op appends one node holding its output
// value and a closure that pushes the output gradient back to its inputs.
// A node requires a gradient iff any input does; parameters require one iff
// they are trainable in the store they were read from.
//
// A tape constructed with record=false never stores closures; it is the
// inference path.
template <class T>
class Tape {
 public:
  using Backward = std::function<void(Tape&, Var self)>;

  explicit Tape(bool record = true) : record_(record) {}

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const noexcept { return record_; }

  Var constant(BasicTensor<T> value);
  Var leaf(BasicTensor<T> value, bool requires_grad);
  // Reads `path` from the store once per tape; later calls return the same
  // node so gradients for shared parameters accumulate in one place.
  Var param(const BasicParamStore<T>& store, const std::string& path);

  const BasicTensor<T>& value(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).value; }
  bool requires_grad(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).requires_grad; }

  // Appends a computed node. `inputs` decides whether it requires a gradient;
  // `backward` is dropped when it does not.
  Var record(BasicTensor<T> value, std::initializer_list<Var> inputs, Backward backward);
  Var record(BasicTensor<T> value, const std::vector<Var>& inputs, Backward backward);

  // Gradient buffer of a node, zero-initialised on first access.
  BasicTensor<T>& grad(Var v);

  // Runs the backward pass from a scalar `loss` and returns gradients of all
  // trainable parameters read through param(). Throws ContractError when the
  // loss has more than one element.
  GradMap<T> backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    BasicTensor<T> value;
    BasicTensor<T> grad;
    bool requires_grad = false;
    Backward backward;
    std::string param_path;
  };

  Var push(Node node);

  bool record_;
  std::vector<Node> nodes_;
  std::map<std::string, int> param_nodes_;
};

// Free-function form of Tape::backward.
template <class T>
GradMap<T> grad(Tape<T>& tape, Var loss) {
  return tape.backward(loss);
}

}  // namespace dada
