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

#include "grafn/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grafn/error.hpp"
#include "grafn/ops.hpp"

namespace grafn {

void LossConfig::validate() const {
  if (!(tau > 0.0)) fail(ErrorKind::kUsage, "tau must be positive");
  if (!(nu >= 0.0 && nu <= 1.0)) fail(ErrorKind::kUsage, "nu must lie in [0, 1]");
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) fail(ErrorKind::kUsage, "lambdas must be >= 0");
  if (!(norm_eps >= 0.0)) fail(ErrorKind::kUsage, "norm_eps must be >= 0");
  weak_aug.validate();
  strong_aug.validate();
  if (weak_aug.p_feature_mask > strong_aug.p_feature_mask ||
      weak_aug.p_edge_drop > strong_aug.p_edge_drop) {
    fail(ErrorKind::kUsage, "weak augmentation must not be stronger than the strong one");
  }
}

SupportSet sample_support(const SplitSpec& split, const std::vector<std::uint32_t>& label_ids,
                          std::size_t class_count, Rng& rng) {
  SupportSet s;
  s.per_class.resize(class_count);
  for (std::uint32_t i : split.labeled) {
    if (i >= label_ids.size()) fail(ErrorKind::kData, "sample_support: labeled index out of range");
    s.per_class[label_ids[i]].push_back(i);
  }
  s.b = split.labeled.size();
  for (std::size_t c = 0; c < class_count; ++c) {
    if (s.per_class[c].empty()) {
      fail(ErrorKind::kData, "sample_support: class " + std::to_string(c) + " has no labeled node");
    }
    s.b = std::min(s.b, s.per_class[c].size());
  }
  s.y_support = DenseMatrix(s.b * class_count, class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    IndexSet& pool = s.per_class[c];
    // Partial Fisher-Yates: the first b entries become the sample.
    for (std::size_t j = 0; j < s.b; ++j) {
      std::swap(pool[j], pool[j + rng.below(pool.size() - j)]);
    }
    pool.resize(s.b);
    for (std::uint32_t i : pool) {
      s.y_support(s.indices.size(), c) = 1.0;
      s.indices.push_back(i);
    }
  }
  return s;
}

Var node_consistency_loss(Var z, Var z_prime, double norm_eps) {
  if (!z.value().same_shape(z_prime.value())) {
    fail(ErrorKind::kShape, "node_consistency_loss: " + z.value().shape() + " vs " +
                                z_prime.value().shape());
  }
  return op::scale(op::mean(op::row_cosine(z, z_prime, norm_eps)), -1.0);
}

double node_consistency_loss(const DenseMatrix& z, const DenseMatrix& z_prime) {
  Tape tape;
  return node_consistency_loss(tape.constant(z), tape.constant(z_prime)).scalar();
}

Var snn_distribution(Var z_anchor, Var z_support, const DenseMatrix& y_support, double tau,
                     double norm_eps) {
  if (!(tau > 0.0)) fail(ErrorKind::kUsage, "snn_distribution: tau must be positive");
  if (z_anchor.cols() != z_support.cols() || y_support.rows() != z_support.rows()) {
    fail(ErrorKind::kShape, "snn_distribution: anchors " + z_anchor.value().shape() +
                                ", supports " + z_support.value().shape() + ", support labels " +
                                y_support.shape());
  }
  Tape& tape = z_anchor.tape();
  Var sims = op::matmul_nt(op::row_normalize(z_anchor, norm_eps),
                           op::row_normalize(z_support, norm_eps));
  Var weights = op::softmax_rows(op::scale(sims, 1.0 / tau));
  return op::matmul(weights, tape.constant(y_support));
}

DenseMatrix snn_distribution(const DenseMatrix& z_anchor, const DenseMatrix& z_support,
                             const DenseMatrix& y_support, double tau) {
  Tape tape;
  return snn_distribution(tape.constant(z_anchor), tape.constant(z_support), y_support, tau)
      .value();
}

IndexSet confident_set(const DenseMatrix& p_target, double nu, const IndexSet& unlabeled) {
  IndexSet out;
  for (std::uint32_t i : unlabeled) {
    if (i >= p_target.rows()) fail(ErrorKind::kShape, "confident_set: index out of range");
    const auto row = p_target.row(i);
    if (!row.empty() && *std::max_element(row.begin(), row.end()) > nu) out.push_back(i);
  }
  return out;
}

Var label_consistency_loss(Var p_pred, Var p_target, const DenseMatrix& y, const IndexSet& labeled,
                           const IndexSet& v_conf, TargetPolicy policy) {
  Tape& tape = p_pred.tape();
  if (policy == TargetPolicy::kRequireDetached && tape.requires_grad(p_target)) {
    fail(ErrorKind::kUsage, "label_consistency_loss: target distribution is not detached");
  }
  if (!y.same_shape(p_pred.value())) {
    fail(ErrorKind::kShape, "label_consistency_loss: labels " + y.shape() + " vs predictions " +
                                p_pred.value().shape());
  }
  if (labeled.empty()) fail(ErrorKind::kUsage, "label_consistency_loss: empty labeled set");
  Var confident = op::cross_entropy(p_target, p_pred, v_conf);
  Var supervised = op::cross_entropy(tape.constant(y), p_pred, labeled);
  return op::add(confident, supervised);
}

Var supervised_loss(Var logits, const std::vector<std::uint32_t>& label_ids,
                    const IndexSet& labeled) {
  if (labeled.empty()) fail(ErrorKind::kUsage, "supervised_loss: empty labeled set");
  return op::softmax_cross_entropy(logits, label_ids, labeled);
}

Var total_loss(Var l_nc, Var l_lc, Var l_sup, const LossConfig& cfg) {
  return op::weighted_sum(cfg.lambda1, l_nc, cfg.lambda2, l_lc, l_sup);
}

}  // namespace grafn
