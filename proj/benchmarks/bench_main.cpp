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

#include <benchmark/benchmark.h>

#include "grafn/graphdata.hpp"
#include "grafn/kernels.hpp"
#include "grafn/objective.hpp"
#include "grafn/runtime.hpp"
#include "grafn/trainer.hpp"

namespace {

using namespace grafn;

// Sparse random graph with roughly Cora's size and density.
const GraphDataset& cora_like() {
  static const GraphDataset ds = [] {
    const std::size_t n = 2708, f = 1433, c = 7;
    Rng rng(1);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t e = 0; e < 5278; ++e) {
      const auto a = static_cast<std::uint32_t>(rng.below(n));
      const auto b = static_cast<std::uint32_t>(rng.below(n));
      if (a != b) edges.emplace_back(a, b);
    }
    DenseMatrix x(n, f);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < 18; ++k) x(i, rng.below(f)) = 1.0;
    }
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i % c);
    return make_dataset("cora_like", n, edges, std::move(x), labels, c);
  }();
  return ds;
}

void BM_SpmmAdjacency(benchmark::State& state) {
  const SparseAdjacency a = normalize_adjacency(cora_like().adj);
  Rng rng(2);
  DenseMatrix x(a.rows, static_cast<std::size_t>(state.range(0)));
  for (double& v : x.values()) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(spmm(a, x));
}
BENCHMARK(BM_SpmmAdjacency)->Arg(64)->Arg(128);

void BM_SpmmFeatures(benchmark::State& state) {
  const CsrMatrix x = CsrMatrix::from_dense(cora_like().features);
  Rng rng(3);
  DenseMatrix w(x.cols, 128);
  for (double& v : w.values()) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(spmm(x, w));
}
BENCHMARK(BM_SpmmFeatures);

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  DenseMatrix a(n, 128), b(128, 128);
  for (double& v : a.values()) v = rng.uniform();
  for (double& v : b.values()) v = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}
BENCHMARK(BM_Matmul)->Arg(512)->Arg(2708);

void BM_Snn(benchmark::State& state) {
  Rng rng(5);
  DenseMatrix z(2708, 128), s(14, 128), y(14, 7);
  for (double& v : z.values()) v = rng.uniform(-1.0, 1.0);
  for (double& v : s.values()) v = rng.uniform(-1.0, 1.0);
  for (std::size_t j = 0; j < 14; ++j) y(j, j / 2) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(snn_distribution(z, s, y, 0.1));
}
BENCHMARK(BM_Snn);

void BM_TrainStep(benchmark::State& state) {
  const GraphDataset& ds = cora_like();
  const SplitSpec split = generate_splits(ds, 0.005, 1, 0)[0];
  const IndexSet unlabeled = split.unlabeled(ds.num_nodes());
  TrainConfig cfg;
  if (state.range(0) == 0) {
    cfg.loss.lambda1 = 0.0;
    cfg.loss.lambda2 = 0.0;
  }
  const PreparedGraph graph = prepare_graph(ds, cfg.feature_row_normalize);
  Model model = init_params({ds.num_features(), cfg.hidden_dim, cfg.embed_dim, ds.class_count},
                            cfg.dropout, 1);
  AdamState adam;
  std::size_t step = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        train_step(ds, graph, split, unlabeled, model, adam, cfg, step_seed(7, step++)));
  }
}
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  grafn::configure_allocator();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
