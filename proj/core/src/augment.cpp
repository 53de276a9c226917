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

#include "grafn/augment.hpp"

#include <vector>

#include "grafn/error.hpp"
#include "grafn/kernels.hpp"

namespace grafn {
namespace {

std::vector<bool> draw_column_mask(std::size_t cols, double p, Rng& rng) {
  std::vector<bool> masked(cols);
  for (std::size_t c = 0; c < cols; ++c) masked[c] = rng.bernoulli(p);
  return masked;
}

}  // namespace

void AugmentConfig::validate() const {
  check_probability(p_feature_mask, "feature mask");
  check_probability(p_edge_drop, "edge drop");
}

DenseMatrix mask_features(const DenseMatrix& x, double p, Rng& rng, MaskMode mode) {
  check_probability(p, "mask_features");
  if (p == 0.0) return x;
  DenseMatrix out = x;
  if (mode == MaskMode::kColumn) {
    const auto masked = draw_column_mask(x.cols(), p, rng);
    for (std::size_t r = 0; r < out.rows(); ++r) {
      auto row = out.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (masked[c]) row[c] = 0.0;
      }
    }
  } else {
    for (double& v : out.values()) {
      if (v != 0.0 && rng.bernoulli(p)) v = 0.0;
    }
  }
  return out;
}

CsrMatrix mask_features(const CsrMatrix& x, double p, Rng& rng, MaskMode mode) {
  check_probability(p, "mask_features");
  if (p == 0.0) return x;
  std::vector<bool> masked;
  if (mode == MaskMode::kColumn) masked = draw_column_mask(x.cols, p, rng);
  CsrMatrix out;
  out.rows = x.rows;
  out.cols = x.cols;
  out.row_offsets.assign(x.rows + 1, 0);
  out.col_indices.reserve(x.nnz());
  out.values.reserve(x.nnz());
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t k = x.row_offsets[r]; k < x.row_offsets[r + 1]; ++k) {
      const bool drop = mode == MaskMode::kColumn ? masked[x.col_indices[k]]
                                                  : (x.values[k] != 0.0 && rng.bernoulli(p));
      if (drop) continue;
      out.col_indices.push_back(x.col_indices[k]);
      out.values.push_back(x.values[k]);
    }
    out.row_offsets[r + 1] = out.col_indices.size();
  }
  return out;
}

SparseAdjacency drop_edges(const SparseAdjacency& a, double p, Rng& rng) {
  check_probability(p, "drop_edges");
  if (!a.has_symmetric_pattern()) fail(ErrorKind::kData, "drop_edges: adjacency is not symmetric");
  if (p == 0.0) return a;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> kept;
  kept.reserve(a.nnz());
  for (std::size_t r = 0; r < a.rows; ++r) {
    for (std::size_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      const std::uint32_t c = a.col_indices[k];
      if (c < r) continue;
      if (c != r && rng.bernoulli(p)) continue;
      kept.emplace_back(static_cast<std::uint32_t>(r), c, a.values[k]);
      if (c != r) kept.emplace_back(c, static_cast<std::uint32_t>(r), a.at(c, r));
    }
  }
  return CsrMatrix::from_triplets(a.rows, a.cols, std::move(kept));
}

GraphView augment_view(const SparseAdjacency& raw_adj, const CsrMatrix& features,
                       const AugmentConfig& cfg, Rng& rng) {
  cfg.validate();
  GraphView view;
  view.features = mask_features(features, cfg.p_feature_mask, rng, cfg.mask_mode);
  view.adj = normalize_adjacency(drop_edges(raw_adj, cfg.p_edge_drop, rng));
  return view;
}

std::pair<SparseAdjacency, DenseMatrix> augment_view(const GraphDataset& ds,
                                                     const AugmentConfig& cfg, Rng& rng) {
  cfg.validate();
  DenseMatrix x = mask_features(ds.features, cfg.p_feature_mask, rng, cfg.mask_mode);
  SparseAdjacency adj = normalize_adjacency(drop_edges(ds.adj, cfg.p_edge_drop, rng));
  return {std::move(adj), std::move(x)};
}

}  // namespace grafn
