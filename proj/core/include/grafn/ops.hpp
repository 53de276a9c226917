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
#include <span>
#include <vector>

#include "grafn/rng.hpp"
#include "grafn/sparse.hpp"
#include "grafn/tape.hpp"

// Differentiable operations recorded on a Tape.
namespace grafn::op {

/// a * x; `a` is constant (copied into the tape record).
Var spmm(const CsrMatrix& a, Var x);
Var matmul(Var x, Var w);
/// x * y^T
Var matmul_nt(Var x, Var y);
/// x + broadcast of the 1xC row `bias`.
Var add_row_bias(Var x, Var bias);
Var add(Var a, Var b);
Var scale(Var x, double factor);
/// Subgradient 0 at exactly 0.
Var relu(Var x);
Var dropout(Var x, double p, Rng& rng, bool training);
/// Column mean removed over all rows.
Var center_columns(Var x);

/// x / max(||x||, eps) per row. With eps == 0 a zero row throws.
Var row_normalize(Var x, double eps);
/// Per-row dot product, N x 1.
Var row_dot(Var x, Var y);
/// Cosine similarity per row, N x 1.
Var row_cosine(Var x, Var y, double eps);
Var mean(Var x);
Var sum(Var x);
Var gather_rows(Var x, std::span<const std::uint32_t> rows);
Var softmax_rows(Var x);

/// Mean over `rows` of -sum_c target[i,c] * log(max(pred[i,c], 1e-12)).
/// Zero when `rows` is empty.
Var cross_entropy(Var target, Var pred, std::span<const std::uint32_t> rows);
/// Mean over `rows` of -log softmax(logits)[i, label_i].
Var softmax_cross_entropy(Var logits, std::span<const std::uint32_t> labels,
                          std::span<const std::uint32_t> rows);
/// w1 * a + w2 * b + c for 1x1 operands, evaluated in that order.
Var weighted_sum(double w1, Var a, double w2, Var b, Var c);

}  // namespace grafn::op
