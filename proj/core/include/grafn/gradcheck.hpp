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

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "grafn/tape.hpp"

namespace grafn {

struct LossEvaluation {
  double loss = 0.0;
  std::uint64_t regime = 0;  // Tape::regime() of the forward pass
};

/// Evaluates the loss. When `backprop` is true it must also zero and then
/// fill the gradients of the checked parameters.
using LossFn = std::function<LossEvaluation(bool backprop)>;

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // perturbation crossed a kink or threshold
  std::string worst_entry;
};

/// Central finite differences against the tape gradient.
/// Relative error per entry is |fd - g| / max(|fd|, |g|, abs_floor).
/// Throws Error(kNumerical) if two evaluations at the same point differ.
GradCheckReport finite_diff_check(const LossFn& loss_fn,
                                  std::span<Parameter* const> params,
                                  double eps = 1e-5, double abs_floor = 1e-8);

}  // namespace grafn
