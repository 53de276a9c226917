// Copyright 2026 The grafn Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "grafn/dense.hpp"

namespace grafn {

/// A trainable weight and its gradient accumulator.
struct Parameter {
  std::string name;
  DenseMatrix value;
  DenseMatrix grad;

  Parameter() = default;
  Parameter(std::string name, DenseMatrix value);

  void zero_grad();
};

class Tape;

/// Handle to a node on a Tape. Cheap to copy; only valid while its tape is
/// alive.
class Var {
 public:
  Var() = default;

  bool valid() const noexcept { return tape_ != nullptr; }
  Tape& tape() const;
  std::size_t id() const noexcept { return id_; }

  const DenseMatrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  /// Value of a 1x1 node.
  double scalar() const;

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

struct BackwardArgs {
  const DenseMatrix& value;
  const DenseMatrix& grad;
  std::span<const DenseMatrix* const> inputs;
  // nullptr for inputs that do not need a gradient.
  std::span<DenseMatrix* const> input_grads;
};

using BackwardFn = std::function<void(const BackwardArgs&)>;

/// Record of the primitive operations of one forward pass. Reverse-mode
/// gradients are replayed in reverse creation order. Parameters are
/// registered once per tape; `backward` accumulates into Parameter::grad.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(DenseMatrix value);
  /// Leaf for `p`. Registering the same parameter again returns the same node.
  Var parameter(Parameter& p);
  /// Copy of `x` that blocks gradient flow.
  Var detach(Var x);

  /// Used by ops: records `value` computed from `inputs`.
  Var record(DenseMatrix value, std::initializer_list<Var> inputs, BackwardFn fn);

  const DenseMatrix& value(Var v) const;
  /// Gradient that reached `v` during backward; empty when none did.
  const DenseMatrix& grad(Var v) const;
  bool requires_grad(Var v) const;
  bool is_detached(Var v) const;
  bool owns(Var v) const noexcept;

  /// Runs reverse accumulation from a 1x1 `loss`. May be called once.
  void backward(Var loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::vector<Parameter*> parameters() const;

  /// Fingerprint of the discrete choices made during the forward pass
  /// (ReLU masks, threshold sets). Gradient checks skip perturbations that
  /// change it.
  void mix_regime(std::uint64_t bits) noexcept;
  std::uint64_t regime() const noexcept { return regime_; }

 private:
  struct Node {
    DenseMatrix value;
    DenseMatrix grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
    bool detached = false;
  };

  const Node& node(Var v) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::size_t> param_nodes_;
  std::uint64_t regime_ = 0xcbf29ce484222325ULL;
  bool backward_done_ = false;
};

void zero_grads(std::span<Parameter* const> params);

}  // namespace grafn
