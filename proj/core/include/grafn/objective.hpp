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
#include <vector>

#include "grafn/augment.hpp"
#include "grafn/dense.hpp"
#include "grafn/graphdata.hpp"
#include "grafn/rng.hpp"
#include "grafn/tape.hpp"

namespace grafn {

/// Which view's embeddings the support nodes are taken from when building
/// a view's class distribution.
enum class SupportView {
  kSame,   // anchors and supports from the same view
  kCross,  // supports from the other view
};

struct LossConfig {
  double tau = 0.1;   // SNN temperature
  double nu = 0.9;    // confidence threshold (strict)
  double lambda1 = 1.0;  // node-wise consistency weight
  double lambda2 = 1.0;  // label-guided consistency weight
  AugmentConfig weak_aug{0.3, 0.3};    // view that produces the target
  AugmentConfig strong_aug{0.5, 0.5};  // view that produces the prediction
  SupportView support_view = SupportView::kSame;
  // Detach the weak-view target. Turning this off exists only for
  // regression tests of the gradient path.
  bool stop_gradient = true;
  // Norm floor for cosine normalization inside training losses. Rows of Z
  // can be exactly zero (isolated node whose features were all masked).
  double norm_eps = 1e-12;

  void validate() const;
};

/// b labeled nodes per class, b = size of the smallest labeled class.
struct SupportSet {
  std::size_t b = 0;
  std::vector<IndexSet> per_class;
  IndexSet indices;        // class-major flattening of per_class
  DenseMatrix y_support;   // (b*C) x C one-hot
};

/// Samples b nodes per class without replacement from split.labeled.
SupportSet sample_support(const SplitSpec& split, const std::vector<std::uint32_t>& label_ids,
                          std::size_t class_count, Rng& rng);

/// -(1/N) sum_i cos(z_i, z'_i). Gradients reach both views.
Var node_consistency_loss(Var z, Var z_prime, double norm_eps = 0.0);
double node_consistency_loss(const DenseMatrix& z, const DenseMatrix& z_prime);

/// Soft nearest neighbours: p_i = sum_j softmax_j(cos(z_i, s_j) / tau) y_j.
/// Rows of the result sum to 1.
Var snn_distribution(Var z_anchor, Var z_support, const DenseMatrix& y_support, double tau,
                     double norm_eps = 0.0);
DenseMatrix snn_distribution(const DenseMatrix& z_anchor, const DenseMatrix& z_support,
                             const DenseMatrix& y_support, double tau);

/// Members of `unlabeled` whose row maximum is strictly greater than nu.
IndexSet confident_set(const DenseMatrix& p_target, double nu, const IndexSet& unlabeled);

enum class TargetPolicy { kRequireDetached, kAllowAttached };

/// Mean H(p_target_i, p_pred_i) over v_conf plus mean H(Y_i, p_pred_i) over
/// the labeled nodes. The first term is zero when v_conf is empty.
Var label_consistency_loss(Var p_pred, Var p_target, const DenseMatrix& y, const IndexSet& labeled,
                           const IndexSet& v_conf,
                           TargetPolicy policy = TargetPolicy::kRequireDetached);

/// Mean softmax cross-entropy over the labeled nodes.
Var supervised_loss(Var logits, const std::vector<std::uint32_t>& label_ids,
                    const IndexSet& labeled);

/// lambda1 * l_nc + lambda2 * l_lc + l_sup
Var total_loss(Var l_nc, Var l_lc, Var l_sup, const LossConfig& cfg);

}  // namespace grafn
