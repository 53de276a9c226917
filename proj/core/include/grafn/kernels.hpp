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

#include <vector>

#include "grafn/dense.hpp"
#include "grafn/rng.hpp"
#include "grafn/sparse.hpp"

// Plain value kernels. Differentiable counterparts live in grafn/ops.hpp.
namespace grafn {

/// a * x for a sparse `a`.
DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& x);
/// a^T * x for a sparse `a`.
DenseMatrix spmm_transposed(const CsrMatrix& a, const DenseMatrix& x);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix relu(const DenseMatrix& x);

/// Subtracts each column's mean over all rows.
DenseMatrix center_columns(const DenseMatrix& x);

/// Inverted dropout. Entries are kept with probability 1 - p and scaled by
/// 1 / (1 - p). Identity when `training` is false or p == 0.
DenseMatrix dropout(const DenseMatrix& x, double p, Rng& rng, bool training);

/// Per-row cosine similarity. Throws on a zero-norm row, naming it.
std::vector<double> row_cosine(const DenseMatrix& x, const DenseMatrix& y);

/// Scales every row to unit L2 norm; zero rows stay zero.
DenseMatrix row_l2_normalize(const DenseMatrix& x);

/// Checks `p` is a valid drop/mask probability in [0, 1).
void check_probability(double p, const char* what);

}  // namespace grafn
