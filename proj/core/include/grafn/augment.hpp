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

#include <utility>

#include "grafn/dense.hpp"
#include "grafn/graphdata.hpp"
#include "grafn/rng.hpp"
#include "grafn/sparse.hpp"

namespace grafn {

enum class MaskMode {
  kColumn,  // one Bernoulli draw per feature dimension, applied to all nodes
  kEntry,   // one draw per stored entry
};

struct AugmentConfig {
  double p_feature_mask = 0.0;
  double p_edge_drop = 0.0;
  MaskMode mask_mode = MaskMode::kColumn;

  void validate() const;
};

DenseMatrix mask_features(const DenseMatrix& x, double p, Rng& rng,
                          MaskMode mode = MaskMode::kColumn);
/// Same masking on a CSR feature matrix. Draw order matches the dense
/// version for kColumn; kEntry draws once per stored (non-zero) entry.
CsrMatrix mask_features(const CsrMatrix& x, double p, Rng& rng,
                        MaskMode mode = MaskMode::kColumn);

/// Drops each undirected edge (r < c) independently with probability p.
/// Both directions go together, so symmetry is preserved.
SparseAdjacency drop_edges(const SparseAdjacency& a, double p, Rng& rng);

struct GraphView {
  SparseAdjacency adj;  // normalized after dropping
  CsrMatrix features;
};

/// Masks features and drops edges, then renormalizes the adjacency.
/// `features` must be the CSR form of ds.features.
GraphView augment_view(const SparseAdjacency& raw_adj, const CsrMatrix& features,
                       const AugmentConfig& cfg, Rng& rng);

/// Dense-feature convenience form of augment_view.
std::pair<SparseAdjacency, DenseMatrix> augment_view(const GraphDataset& ds,
                                                     const AugmentConfig& cfg, Rng& rng);

}  // namespace grafn
