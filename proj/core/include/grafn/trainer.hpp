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
#include <string>
#include <vector>

#include "grafn/error.hpp"
#include "grafn/gradcheck.hpp"
#include "grafn/graphdata.hpp"
#include "grafn/model.hpp"
#include "grafn/objective.hpp"

namespace grafn {

enum class InferenceMode {
  kLinear,  // argmax of the linear head
  kSnn,     // argmax of the SNN distribution against all labeled nodes
};

struct TrainConfig {
  std::size_t hidden_dim = 128;
  std::size_t embed_dim = 128;
  double learning_rate = 0.001;
  double weight_decay = 5e-4;
  double dropout = 0.5;
  std::size_t max_epochs = 500;
  LossConfig loss;
  std::uint64_t seed = 0;
  bool feature_row_normalize = true;
  bool center_embeddings = false;
  InferenceMode inference = InferenceMode::kLinear;

  void validate() const;
};

/// Clean-graph inputs shared by every step of a run.
struct PreparedGraph {
  CsrMatrix features;        // optionally row L2-normalized
  SparseAdjacency raw_adj;   // A
  SparseAdjacency norm_adj;  // normalized A + I
};

PreparedGraph prepare_graph(const GraphDataset& ds, bool feature_row_normalize);

struct StepLosses {
  double nc = 0.0;
  double lc = 0.0;
  double sup = 0.0;
  double total = 0.0;
  std::size_t confident = 0;  // |V_conf| for this step
};

/// The loss terms of one step recorded on a tape. Terms whose weight is 0
/// are not built and hold a constant 0.
struct StepObjective {
  Var nc;
  Var lc;
  Var sup;
  Var total;
  std::size_t confident = 0;
  DenseMatrix target;  // weak-view class distribution, when built
};

/// Draws both views, encodes them with the shared encoder and records the
/// combined objective. All randomness derives from `step_seed`.
/// A non-null `frozen_target` replaces the detached weak-view distribution
/// (and so fixes the confident set); it is ignored without stop-gradient.
StepObjective build_objective(Tape& tape, const GraphDataset& ds, const PreparedGraph& graph,
                              const SplitSpec& split, const IndexSet& unlabeled, Model& model,
                              const TrainConfig& cfg, std::uint64_t step_seed,
                              const DenseMatrix* frozen_target = nullptr);

struct AdamState {
  std::vector<DenseMatrix> m;
  std::vector<DenseMatrix> v;
  std::size_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One Adam step (step counter is advanced first). Decoupled weight decay
/// value -= lr * wd * value is applied before the moment update.
void adam_update(std::span<Parameter* const> params, AdamState& state, double lr,
                 double weight_decay);

/// Seed of the stream used by step `step_index` of a run.
std::uint64_t step_seed(std::uint64_t run_seed, std::size_t step_index);
/// Seed of a run: mixes the config seed with the split seed.
std::uint64_t run_seed(const TrainConfig& cfg, const SplitSpec& split);

/// Zero grads, build the objective, backprop and update. Throws
/// Error(kNumerical) when the total loss is not finite.
StepLosses train_step(const GraphDataset& ds, const PreparedGraph& graph, const SplitSpec& split,
                      const IndexSet& unlabeled, Model& model, AdamState& adam,
                      const TrainConfig& cfg, std::uint64_t seed);

/// Finite-difference check of the full step objective for step seed
/// `seed`. Every evaluation redraws the same views, supports and dropout
/// masks. The detached target is held at its value for the unperturbed
/// parameters, which is the function the tape differentiates.
GradCheckReport check_objective_gradients(const GraphDataset& ds, const SplitSpec& split,
                                          Model& model, const TrainConfig& cfg,
                                          std::uint64_t seed, double eps = 1e-5);

struct RunResult {
  double best_val_accuracy = 0.0;
  double test_accuracy_at_best_val = 0.0;
  std::size_t epoch_of_best = 0;  // 1-based
  std::vector<StepLosses> loss_history;
  std::vector<double> val_history;   // clean-graph validation accuracy per epoch
  std::vector<double> test_history;  // clean-graph test accuracy per epoch
  Model best_model;
};

/// Raised by fit when the objective diverges; carries the history so far.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, RunResult partial)
      : Error(ErrorKind::kNumerical, what), partial_(std::move(partial)) {}
  const RunResult& partial() const noexcept { return partial_; }

 private:
  RunResult partial_;
};

/// Full-batch training, one step per epoch, keeping the checkpoint with the
/// highest validation accuracy (earliest on ties).
RunResult fit(const GraphDataset& ds, const SplitSpec& split, const TrainConfig& cfg);

std::vector<std::uint32_t> predict_labels(const Model& model, const PreparedGraph& graph,
                                          const SplitSpec& split,
                                          const std::vector<std::uint32_t>& label_ids,
                                          std::size_t class_count, InferenceMode mode,
                                          double tau = 0.1);

/// Fraction of `nodes` whose prediction matches the label.
double accuracy(const std::vector<std::uint32_t>& predicted,
                const std::vector<std::uint32_t>& label_ids, const IndexSet& nodes);

/// Linear-head accuracy of `model` over `nodes` on the clean graph.
double evaluate_accuracy(const GraphDataset& ds, const Model& model, const IndexSet& nodes,
                         bool feature_row_normalize = true);

/// RunResult as JSON; `config_text` is echoed under "config".
std::string run_result_to_json(const RunResult& result, const SplitSpec& split,
                               const TrainConfig& cfg);

}  // namespace grafn
