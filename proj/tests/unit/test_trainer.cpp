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

#include <cmath>

#include "grafn/error.hpp"
#include "grafn/trainer.hpp"
#include "testing.hpp"

using namespace grafn;

namespace {

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.hidden_dim = 8;
  cfg.embed_dim = 6;
  cfg.learning_rate = 0.01;
  cfg.max_epochs = 6;
  cfg.loss.nu = 0.5;
  return cfg;
}

struct Fixture {
  GraphDataset ds = random_dataset(40, 8, 3, 0.15, 17);
  SplitSpec split = generate_splits(ds, 0.3, 1, 2)[0];
};

}  // namespace

TEST_CASE("Adam leaves parameters alone for zero gradients without decay") {
  Parameter p("p", DenseMatrix(2, 2, 1.5));
  std::vector<Parameter*> ps{&p};
  AdamState st;
  adam_update(ps, st, 0.1, 0.0);
  CHECK(p.value == DenseMatrix(2, 2, 1.5));
  CHECK(st.step == 1);
}

TEST_CASE("first Adam step moves each weight by about lr against the gradient") {
  Parameter p("p", DenseMatrix(1, 3, std::vector<double>{1.0, 1.0, 1.0}));
  p.grad = DenseMatrix(1, 3, std::vector<double>{2.0, -0.5, 1e-3});
  std::vector<Parameter*> ps{&p};
  AdamState st;
  adam_update(ps, st, 0.01, 0.0);
  CHECK(p.value(0, 0) == doctest::Approx(0.99).epsilon(1e-6));
  CHECK(p.value(0, 1) == doctest::Approx(1.01).epsilon(1e-6));
  CHECK(p.value(0, 2) == doctest::Approx(0.99).epsilon(1e-4));
}

TEST_CASE("decoupled weight decay shrinks before the moment update") {
  Parameter p("p", DenseMatrix(1, 1, 2.0));
  std::vector<Parameter*> ps{&p};
  AdamState st;
  adam_update(ps, st, 0.1, 0.5);  // zero gradient
  CHECK(p.value(0, 0) == doctest::Approx(2.0 * (1.0 - 0.05)));
}

TEST_CASE("train config validation") {
  TrainConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.hidden_dim = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.max_epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = TrainConfig{};
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("step seeds differ per step and per run") {
  TrainConfig cfg;
  SplitSpec a, b;
  a.seed = 1;
  b.seed = 2;
  CHECK(run_seed(cfg, a) != run_seed(cfg, b));
  CHECK(step_seed(5, 0) != step_seed(5, 1));
  CHECK(step_seed(5, 3) == step_seed(5, 3));
}

TEST_CASE("fit is deterministic and its history satisfies the loss identity") {
  Fixture f;
  const TrainConfig cfg = small_config();
  const RunResult r1 = fit(f.ds, f.split, cfg);
  const RunResult r2 = fit(f.ds, f.split, cfg);
  REQUIRE(r1.loss_history.size() == cfg.max_epochs);
  CHECK(r1.val_history.size() == cfg.max_epochs);
  CHECK(r1.test_history.size() == cfg.max_epochs);
  for (std::size_t e = 0; e < cfg.max_epochs; ++e) {
    const StepLosses& l = r1.loss_history[e];
    CHECK(l.total == r2.loss_history[e].total);
    CHECK(std::abs(l.total - (cfg.loss.lambda1 * l.nc + cfg.loss.lambda2 * l.lc + l.sup)) < 1e-12);
    CHECK(l.nc >= -1.0 - 1e-12);
    CHECK(l.nc <= 1.0 + 1e-12);
    CHECK(l.lc >= 0.0);
  }
  CHECK(r1.test_accuracy_at_best_val == r2.test_accuracy_at_best_val);
  CHECK(r1.epoch_of_best >= 1);
  CHECK(r1.best_val_accuracy == r1.val_history[r1.epoch_of_best - 1]);
  CHECK(r1.test_accuracy_at_best_val == r1.test_history[r1.epoch_of_best - 1]);
  for (std::size_t e = 0; e + 1 < r1.epoch_of_best; ++e) CHECK(r1.val_history[e] < r1.best_val_accuracy);
  for (double v : r1.val_history) CHECK(v <= r1.best_val_accuracy);
  CHECK(evaluate_accuracy(f.ds, r1.best_model, f.split.test) == r1.test_accuracy_at_best_val);
}

TEST_CASE("a single epoch and the supervised-only special case") {
  Fixture f;
  TrainConfig cfg = small_config();
  cfg.max_epochs = 1;
  cfg.loss.lambda1 = 0.0;
  cfg.loss.lambda2 = 0.0;
  const RunResult r = fit(f.ds, f.split, cfg);
  REQUIRE(r.loss_history.size() == 1);
  CHECK(r.epoch_of_best == 1);
  CHECK(r.loss_history[0].nc == 0.0);
  CHECK(r.loss_history[0].lc == 0.0);
  CHECK(r.loss_history[0].total == r.loss_history[0].sup);
}

TEST_CASE("divergence raises with the partial history") {
  Fixture f;
  TrainConfig cfg = small_config();
  cfg.learning_rate = 1e200;
  cfg.max_epochs = 50;
  try {
    fit(f.ds, f.split, cfg);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.kind() == ErrorKind::kNumerical);
    CHECK(e.partial().loss_history.size() < cfg.max_epochs);
  }
}

TEST_CASE("objective gradients pass a finite difference check") {
  Fixture f;
  TrainConfig cfg = small_config();
  for (double nu : {0.0, 0.9}) {
    cfg.loss.nu = nu;
    Model m = init_params({8, 8, 6, 3}, cfg.dropout, 3);
    const GradCheckReport r = check_objective_gradients(f.ds, f.split, m, cfg, 99);
    CHECK(r.checked > 0);
    CHECK(r.max_rel_error < 1e-5);
  }
  cfg.center_embeddings = true;
  Model m = init_params({8, 8, 6, 3}, cfg.dropout, 3);
  m.encoder.center = true;
  const GradCheckReport r = check_objective_gradients(f.ds, f.split, m, cfg, 99);
  CHECK(r.checked > 0);
  CHECK(r.max_rel_error < 1e-5);
}

TEST_CASE("accuracy helpers") {
  CHECK(accuracy({0, 1, 1, 2}, {0, 1, 2, 2}, {0, 1, 2, 3}) == 0.75);
  CHECK(accuracy({0, 1, 1, 2}, {0, 1, 2, 2}, {2}) == 0.0);
  Fixture f;
  const Model m = init_params({8, 8, 6, 3}, 0.0, 1);
  CHECK_THROWS_AS(evaluate_accuracy(f.ds, m, {}), Error);
}

TEST_CASE("SNN inference predicts from labeled supports") {
  Fixture f;
  const PreparedGraph g = prepare_graph(f.ds, true);
  const Model m = init_params({8, 8, 6, 3}, 0.0, 1);
  const auto pred = predict_labels(m, g, f.split, f.ds.label_ids, 3, InferenceMode::kSnn);
  CHECK(pred.size() == f.ds.num_nodes());
  for (auto p : pred) CHECK(p < 3);
  const auto lin = predict_labels(m, g, f.split, f.ds.label_ids, 3, InferenceMode::kLinear);
  CHECK(lin == predict(m, g.norm_adj, g.features));
}

TEST_CASE("run result JSON carries the per-epoch history") {
  Fixture f;
  const TrainConfig cfg = small_config();
  const RunResult r = fit(f.ds, f.split, cfg);
  const std::string json = run_result_to_json(r, f.split, cfg);
  CHECK(json.find("\"loss_history\"") != std::string::npos);
  CHECK(json.find("\"confident\"") != std::string::npos);
  CHECK(json.find("\"config_fingerprint\"") != std::string::npos);
}
