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

#include "grafn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grafn/error.hpp"

namespace grafn {

CsrMatrix CsrMatrix::from_triplets(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets) {
  for (const auto& [r, c, v] : triplets) {
    if (r >= rows || c >= cols) {
      fail(ErrorKind::kData, "triplet (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") outside " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_offsets.assign(rows + 1, 0);
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto [r, c, v] = triplets[k];
    if (!m.col_indices.empty() && k > 0 && std::get<0>(triplets[k - 1]) == r &&
        std::get<1>(triplets[k - 1]) == c) {
      m.values.back() += v;
      continue;
    }
    m.col_indices.push_back(c);
    m.values.push_back(v);
    ++m.row_offsets[r + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_offsets[r + 1] += m.row_offsets[r];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& dense) {
  CsrMatrix m;
  m.rows = dense.rows();
  m.cols = dense.cols();
  m.row_offsets.assign(m.rows + 1, 0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double v = dense(r, c);
      if (v != 0.0) {
        m.col_indices.push_back(static_cast<std::uint32_t>(c));
        m.values.push_back(v);
      }
    }
    m.row_offsets[r + 1] = m.col_indices.size();
  }
  return m;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.row_offsets[i + 1] = i + 1;
    m.col_indices[i] = static_cast<std::uint32_t>(i);
  }
  return m;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      d(r, col_indices[k]) += values[k];
    }
  }
  return d;
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[r]);
  const auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[r + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(c));
  if (it == last || *it != c) return 0.0;
  return values[static_cast<std::size_t>(it - col_indices.begin())];
}

void CsrMatrix::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorKind::kData, "CSR: " + msg); };
  if (row_offsets.size() != rows + 1) bad("row_offsets length != rows + 1");
  if (row_offsets.front() != 0) bad("row_offsets[0] != 0");
  if (row_offsets.back() != col_indices.size()) bad("row_offsets end != nnz");
  if (values.size() != col_indices.size()) bad("values length != nnz");
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_offsets[r] > row_offsets[r + 1]) bad("row_offsets not monotone at row " + std::to_string(r));
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (col_indices[k] >= cols) bad("column out of range in row " + std::to_string(r));
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1]) {
        bad("columns not strictly increasing in row " + std::to_string(r));
      }
      if (!std::isfinite(values[k])) bad("non-finite value in row " + std::to_string(r));
    }
  }
}

bool CsrMatrix::has_symmetric_pattern() const {
  if (rows != cols) return false;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      const std::size_t c = col_indices[k];
      const auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[c]);
      const auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[c + 1]);
      if (!std::binary_search(first, last, static_cast<std::uint32_t>(r))) return false;
    }
  }
  return true;
}

bool CsrMatrix::is_symmetric(double tol) const {
  if (!has_symmetric_pattern()) return false;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (std::abs(values[k] - at(col_indices[k], r)) > tol) return false;
    }
  }
  return true;
}

}  // namespace grafn
