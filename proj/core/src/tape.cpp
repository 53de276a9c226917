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

#include "grafn/tape.hpp"

#include <string>

#include "grafn/error.hpp"

namespace grafn {

Parameter::Parameter(std::string name_, DenseMatrix value_)
    : name(std::move(name_)), value(std::move(value_)), grad(value.rows(), value.cols()) {}

void Parameter::zero_grad() {
  if (!grad.same_shape(value)) grad = DenseMatrix(value.rows(), value.cols());
  grad.fill(0.0);
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

Tape& Var::tape() const {
  if (tape_ == nullptr) fail(ErrorKind::kUsage, "Var: use of an empty handle");
  return *tape_;
}

const DenseMatrix& Var::value() const { return tape().value(*this); }

double Var::scalar() const {
  const DenseMatrix& v = value();
  if (v.rows() != 1 || v.cols() != 1) {
    fail(ErrorKind::kShape, "Var::scalar on a " + v.shape() + " node");
  }
  return v(0, 0);
}

bool Tape::owns(Var v) const noexcept { return v.tape_ == this && v.id_ < nodes_.size(); }

const Tape::Node& Tape::node(Var v) const {
  if (!owns(v)) fail(ErrorKind::kUsage, "Tape: dangling node (handle from another tape)");
  return nodes_[v.id_];
}

Var Tape::constant(DenseMatrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  if (!p.grad.same_shape(p.value)) p.zero_grad();
  Node n;
  n.value = p.value;
  n.param = &p;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  param_nodes_.emplace(&p, nodes_.size() - 1);
  return Var(this, nodes_.size() - 1);
}

Var Tape::detach(Var x) {
  DenseMatrix copy = node(x).value;
  Var out = constant(std::move(copy));
  nodes_[out.id_].detached = true;
  return out;
}

Var Tape::record(DenseMatrix value, std::initializer_list<Var> inputs, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  for (Var in : inputs) {
    node(in);  // ownership check
    n.inputs.push_back(in.id_);
    n.requires_grad = n.requires_grad || nodes_[in.id_].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

const DenseMatrix& Tape::value(Var v) const { return node(v).value; }

const DenseMatrix& Tape::grad(Var v) const { return node(v).grad; }

bool Tape::requires_grad(Var v) const { return node(v).requires_grad; }

bool Tape::is_detached(Var v) const { return node(v).detached; }

void Tape::backward(Var loss) {
  const Node& root = node(loss);
  if (root.value.rows() != 1 || root.value.cols() != 1) {
    fail(ErrorKind::kShape, "backward: loss must be 1x1, got " + root.value.shape());
  }
  if (backward_done_) fail(ErrorKind::kUsage, "backward: already run on this tape");
  backward_done_ = true;
  if (!root.requires_grad) return;

  nodes_[loss.id_].grad = DenseMatrix(1, 1, 1.0);
  std::vector<const DenseMatrix*> in_values;
  std::vector<DenseMatrix*> in_grads;
  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty() || !n.requires_grad) continue;
    if (n.param != nullptr) {
      n.param->grad.axpy(1.0, n.grad);
      continue;
    }
    if (!n.backward) continue;
    in_values.clear();
    in_grads.clear();
    for (std::size_t in : n.inputs) {
      Node& src = nodes_[in];
      in_values.push_back(&src.value);
      if (src.requires_grad) {
        if (src.grad.empty()) src.grad = DenseMatrix(src.value.rows(), src.value.cols());
        in_grads.push_back(&src.grad);
      } else {
        in_grads.push_back(nullptr);
      }
    }
    n.backward(BackwardArgs{n.value, n.grad, in_values, in_grads});
  }
}

std::vector<Parameter*> Tape::parameters() const {
  std::vector<Parameter*> out;
  for (const Node& n : nodes_) {
    if (n.param != nullptr) out.push_back(n.param);
  }
  return out;
}

void Tape::mix_regime(std::uint64_t bits) noexcept {
  regime_ ^= bits;
  regime_ *= 0x100000001b3ULL;
}

}  // namespace grafn
