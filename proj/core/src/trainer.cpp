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

#include "grafn/trainer.hpp"

#include <cmath>
#include <json.hpp>

#include "grafn/augment.hpp"
#include "grafn/config.hpp"
#include "grafn/kernels.hpp"
#include "grafn/ops.hpp"
#include "grafn/rng.hpp"

namespace grafn {

namespace {

enum StreamTag : std::uint64_t {
  kSupportStream = 1,
  kWeakViewStream = 2,
  kStrongViewStream = 3,
  kWeakDropoutStream = 4,
  kStrongDropoutStream = 5,
};

Rng stream(std::uint64_t seed, StreamTag tag) { return Rng(mix_seed(seed, tag)); }

std::uint64_t hash_indices(const IndexSet& s) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
  for (std::uint32_t i : s) h = mix_seed(h, i);
  return h;
}

CsrMatrix row_normalized(const CsrMatrix& x) {
  CsrMatrix out = x;
  for (std::size_t r = 0; r < out.rows; ++r) {
    double sq = 0.0;
    for (std::size_t k = out.row_offsets[r]; k < out.row_offsets[r + 1]; ++k) {
      sq += out.values[k] * out.values[k];
    }
    if (sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t k = out.row_offsets[r]; k < out.row_offsets[r + 1]; ++k) out.values[k] *= inv;
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (hidden_dim == 0 || embed_dim == 0) fail(ErrorKind::kUsage, "hidden_dim and embed_dim must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    fail(ErrorKind::kUsage, "learning_rate must be positive");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    fail(ErrorKind::kUsage, "weight_decay must be non-negative");
  }
  check_probability(dropout, "dropout");
  if (max_epochs == 0) fail(ErrorKind::kUsage, "max_epochs must be at least 1");
  loss.validate();
}

PreparedGraph prepare_graph(const GraphDataset& ds, bool feature_row_normalize) {
  PreparedGraph g;
  g.features = CsrMatrix::from_dense(ds.features);
  if (feature_row_normalize) g.features = row_normalized(g.features);
  g.raw_adj = ds.adj;
  g.norm_adj = normalize_adjacency(ds.adj);
  return g;
}

std::uint64_t step_seed(std::uint64_t run_seed, std::size_t step_index) {
  return mix_seed(run_seed, step_index);
}

std::uint64_t run_seed(const TrainConfig& cfg, const SplitSpec& split) {
  return mix_seed(cfg.seed, split.seed);
}

StepObjective build_objective(Tape& tape, const GraphDataset& ds, const PreparedGraph& graph,
                              const SplitSpec& split, const IndexSet& unlabeled, Model& model,
                              const TrainConfig& cfg, std::uint64_t seed,
                              const DenseMatrix* frozen_target) {
  const LossConfig& lc = cfg.loss;
  const bool consistency = lc.lambda1 != 0.0 || lc.lambda2 != 0.0;

  Rng strong_aug = stream(seed, kStrongViewStream);
  Rng strong_drop = stream(seed, kStrongDropoutStream);
  const GraphView strong = augment_view(graph.raw_adj, graph.features, lc.strong_aug, strong_aug);
  const Var z = encode(tape, model.encoder, strong.adj, strong.features, true, strong_drop);

  StepObjective out;
  out.sup = supervised_loss(classify(tape, model.head, z), ds.label_ids, split.labeled);
  if (!consistency) {
    out.nc = tape.constant(DenseMatrix(1, 1, 0.0));
    out.lc = tape.constant(DenseMatrix(1, 1, 0.0));
    out.total = total_loss(out.nc, out.lc, out.sup, lc);
    return out;
  }

  Rng weak_aug = stream(seed, kWeakViewStream);
  Rng weak_drop = stream(seed, kWeakDropoutStream);
  const GraphView weak = augment_view(graph.raw_adj, graph.features, lc.weak_aug, weak_aug);
  const Var z_weak = encode(tape, model.encoder, weak.adj, weak.features, true, weak_drop);

  out.nc = lc.lambda1 != 0.0 ? node_consistency_loss(z, z_weak, lc.norm_eps)
                             : tape.constant(DenseMatrix(1, 1, 0.0));

  if (lc.lambda2 != 0.0) {
    Rng support_rng = stream(seed, kSupportStream);
    const SupportSet support = sample_support(split, ds.label_ids, ds.class_count, support_rng);
    const bool cross = lc.support_view == SupportView::kCross;
    const Var s_strong = op::gather_rows(cross ? z_weak : z, support.indices);
    const Var s_weak = op::gather_rows(cross ? z : z_weak, support.indices);
    const Var p_pred = snn_distribution(z, s_strong, support.y_support, lc.tau, lc.norm_eps);
    Var p_target = snn_distribution(z_weak, s_weak, support.y_support, lc.tau, lc.norm_eps);
    if (lc.stop_gradient) {
      p_target = frozen_target != nullptr ? tape.constant(*frozen_target) : tape.detach(p_target);
    }
    out.target = p_target.value();
    const IndexSet v_conf = confident_set(p_target.value(), lc.nu, unlabeled);
    tape.mix_regime(hash_indices(v_conf));
    out.confident = v_conf.size();
    out.lc = label_consistency_loss(
        p_pred, p_target, ds.labels, split.labeled, v_conf,
        lc.stop_gradient ? TargetPolicy::kRequireDetached : TargetPolicy::kAllowAttached);
  } else {
    out.lc = tape.constant(DenseMatrix(1, 1, 0.0));
  }
  out.total = total_loss(out.nc, out.lc, out.sup, lc);
  return out;
}

void adam_update(std::span<Parameter* const> params, AdamState& state, double lr,
                 double weight_decay) {
  if (state.m.empty()) {
    for (const Parameter* p : params) {
      state.m.emplace_back(p->value.rows(), p->value.cols(), 0.0);
      state.v.emplace_back(p->value.rows(), p->value.cols(), 0.0);
    }
  }
  if (state.m.size() != params.size()) {
    fail(ErrorKind::kShape, "adam state holds " + std::to_string(state.m.size()) +
                                " slots for " + std::to_string(params.size()) + " parameters");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    if (!p.grad.same_shape(p.value) || !state.m[i].same_shape(p.value)) {
      fail(ErrorKind::kShape, "adam shape mismatch for " + p.name + ": value " + p.value.shape() +
                                  ", grad " + p.grad.shape() + ", moment " + state.m[i].shape());
    }
    auto value = p.value.values();
    auto grad = p.grad.values();
    auto m = state.m[i].values();
    auto v = state.v[i].values();
    for (std::size_t k = 0; k < value.size(); ++k) {
      value[k] -= lr * weight_decay * value[k];
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * grad[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * grad[k] * grad[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      value[k] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

StepLosses train_step(const GraphDataset& ds, const PreparedGraph& graph, const SplitSpec& split,
                      const IndexSet& unlabeled, Model& model, AdamState& adam,
                      const TrainConfig& cfg, std::uint64_t seed) {
  std::vector<Parameter*> params = model.parameters();
  zero_grads(params);
  Tape tape;
  const StepObjective obj = build_objective(tape, ds, graph, split, unlabeled, model, cfg, seed);
  StepLosses losses{obj.nc.scalar(), obj.lc.scalar(), obj.sup.scalar(), obj.total.scalar(),
                    obj.confident};
  if (!std::isfinite(losses.total)) {
    fail(ErrorKind::kNumerical, "total loss is not finite (nc=" + std::to_string(losses.nc) +
                                    ", lc=" + std::to_string(losses.lc) +
                                    ", sup=" + std::to_string(losses.sup) + ")");
  }
  tape.backward(obj.total);
  adam_update(params, adam, cfg.learning_rate, cfg.weight_decay);
  return losses;
}

GradCheckReport check_objective_gradients(const GraphDataset& ds, const SplitSpec& split,
                                          Model& model, const TrainConfig& cfg,
                                          std::uint64_t seed, double eps) {
  cfg.validate();
  validate_split(split, ds);
  const PreparedGraph graph = prepare_graph(ds, cfg.feature_row_normalize);
  const IndexSet unlabeled = split.unlabeled(ds.num_nodes());
  std::vector<Parameter*> params = model.parameters();
  DenseMatrix target;
  {
    Tape tape;
    target = build_objective(tape, ds, graph, split, unlabeled, model, cfg, seed).target;
  }
  const DenseMatrix* frozen = target.empty() ? nullptr : &target;
  auto loss_fn = [&](bool backprop) {
    Tape tape;
    const StepObjective obj =
        build_objective(tape, ds, graph, split, unlabeled, model, cfg, seed, frozen);
    if (backprop) {
      zero_grads(params);
      tape.backward(obj.total);
    }
    return LossEvaluation{obj.total.scalar(), tape.regime()};
  };
  return finite_diff_check(loss_fn, params, eps);
}

std::vector<std::uint32_t> predict_labels(const Model& model, const PreparedGraph& graph,
                                          const SplitSpec& split,
                                          const std::vector<std::uint32_t>& label_ids,
                                          std::size_t class_count, InferenceMode mode,
                                          double tau) {
  if (mode == InferenceMode::kLinear) return predict(model, graph.norm_adj, graph.features);
  const DenseMatrix z = embed(model.encoder, graph.norm_adj, graph.features);
  DenseMatrix zs(split.labeled.size(), z.cols());
  DenseMatrix ys(split.labeled.size(), class_count, 0.0);
  for (std::size_t i = 0; i < split.labeled.size(); ++i) {
    const auto src = z.row(split.labeled[i]);
    std::copy(src.begin(), src.end(), zs.row(i).begin());
    ys(i, label_ids[split.labeled[i]]) = 1.0;
  }
  Tape tape;
  const Var p = snn_distribution(tape.constant(z), tape.constant(std::move(zs)), ys, tau, 1e-12);
  return argmax_rows(p.value());
}

double accuracy(const std::vector<std::uint32_t>& predicted,
                const std::vector<std::uint32_t>& label_ids, const IndexSet& nodes) {
  if (nodes.empty()) fail(ErrorKind::kUsage, "accuracy over an empty node set");
  std::size_t hits = 0;
  for (std::uint32_t i : nodes) hits += predicted.at(i) == label_ids.at(i) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

double evaluate_accuracy(const GraphDataset& ds, const Model& model, const IndexSet& nodes,
                         bool feature_row_normalize) {
  if (nodes.empty()) fail(ErrorKind::kUsage, "evaluate_accuracy over an empty node set");
  const PreparedGraph g = prepare_graph(ds, feature_row_normalize);
  return accuracy(predict(model, g.norm_adj, g.features), ds.label_ids, nodes);
}

RunResult fit(const GraphDataset& ds, const SplitSpec& split, const TrainConfig& cfg) {
  cfg.validate();
  validate_split(split, ds);
  if (split.val.empty() || split.test.empty()) {
    fail(ErrorKind::kUsage, "fit needs non-empty validation and test sets");
  }
  const PreparedGraph graph = prepare_graph(ds, cfg.feature_row_normalize);
  const IndexSet unlabeled = split.unlabeled(ds.num_nodes());
  const std::uint64_t seed = run_seed(cfg, split);
  const ModelDims dims{ds.num_features(), cfg.hidden_dim, cfg.embed_dim, ds.class_count};
  Model model = init_params(dims, cfg.dropout, seed);
  model.encoder.center = cfg.center_embeddings;
  AdamState adam;

  RunResult result;
  result.best_val_accuracy = -1.0;
  result.loss_history.reserve(cfg.max_epochs);
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    try {
      result.loss_history.push_back(train_step(ds, graph, split, unlabeled, model, adam, cfg,
                                               step_seed(seed, epoch - 1)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNumerical) throw;
      if (result.best_val_accuracy < 0.0) {
        result.best_val_accuracy = 0.0;
        result.best_model = model;
      }
      throw DivergenceError("epoch " + std::to_string(epoch) + ": " + e.what(), std::move(result));
    }
    const auto predicted =
        predict_labels(model, graph, split, ds.label_ids, ds.class_count, cfg.inference,
                       cfg.loss.tau);
    const double val = accuracy(predicted, ds.label_ids, split.val);
    const double test = accuracy(predicted, ds.label_ids, split.test);
    result.val_history.push_back(val);
    result.test_history.push_back(test);
    if (val > result.best_val_accuracy) {
      result.best_val_accuracy = val;
      result.test_accuracy_at_best_val = test;
      result.epoch_of_best = epoch;
      result.best_model = model;
    }
  }
  return result;
}

std::string run_result_to_json(const RunResult& result, const SplitSpec& split,
                               const TrainConfig& cfg) {
  nlohmann::ordered_json j;
  j["best_val_accuracy"] = result.best_val_accuracy;
  j["test_accuracy_at_best_val"] = result.test_accuracy_at_best_val;
  j["epoch_of_best"] = result.epoch_of_best;
  j["epochs_run"] = result.loss_history.size();
  j["split_seed"] = split.seed;
  j["label_rate"] = split.label_rate;
  nlohmann::ordered_json config;
  for (const auto& [key, value] : config_items(cfg)) config[key] = value;
  j["config"] = config;
  j["config_fingerprint"] = config_fingerprint(cfg);
  auto history = nlohmann::ordered_json::array();
  for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
    const StepLosses& s = result.loss_history[e];
    nlohmann::ordered_json row{{"epoch", e + 1},   {"nc", s.nc},       {"lc", s.lc},
                               {"sup", s.sup},     {"total", s.total}, {"confident", s.confident}};
    if (e < result.val_history.size()) {
      row["val_accuracy"] = result.val_history[e];
      row["test_accuracy"] = result.test_history[e];
    }
    history.push_back(row);
  }
  j["loss_history"] = history;
  return j.dump(2) + "\n";
}

}  // namespace grafn
