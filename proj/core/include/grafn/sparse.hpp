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
#include <tuple>
#include <vector>

#include "grafn/dense.hpp"

namespace grafn {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::uint32_t> col_indices;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return col_indices.size(); }
  std::size_t row_nnz(std::size_t r) const { return row_offsets[r + 1] - row_offsets[r]; }

  /// Builds from (row, col, value) triplets. Duplicates are summed.
  static CsrMatrix from_triplets(
      std::size_t rows, std::size_t cols,
      std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets);
  /// Keeps the exact non-zeros of `dense`.
  static CsrMatrix from_dense(const DenseMatrix& dense);
  static CsrMatrix identity(std::size_t n);

  DenseMatrix to_dense() const;

  /// Value at (r, c), 0 when not stored.
  double at(std::size_t r, std::size_t c) const;

  /// Throws Error(kData) when the CSR structure is inconsistent.
  void validate() const;
  bool has_symmetric_pattern() const;
  bool is_symmetric(double tol = 0.0) const;
};

/// Node-by-node adjacency; `rows == cols == n`.
using SparseAdjacency = CsrMatrix;

}  // namespace grafn
