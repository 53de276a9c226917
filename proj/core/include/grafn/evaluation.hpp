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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grafn/graphdata.hpp"
#include "grafn/model.hpp"
#include "grafn/trainer.hpp"

namespace grafn {

struct SplitOutcome {
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double best_val_accuracy = 0.0;
  std::size_t epoch_of_best = 0;
};

struct BenchReport {
  std::string dataset;
  double label_rate = 0.0;
  std::vector<SplitOutcome> splits;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one split
  std::string config_fingerprint;
  TrainConfig config;
};

/// Called once per finished split, in split order.
using SplitObserver =
    std::function<void(std::size_t index, const SplitSpec& split, const RunResult& result)>;

struct BenchOptions {
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;  // concurrent runs; results do not depend on it
  SplitObserver observer;
};

/// fit() on each of `n_splits` generated splits. A failing split aborts the
/// benchmark with its seed in the message.
BenchReport run_benchmark(const GraphDataset& ds, double label_rate, std::size_t n_splits,
                          const TrainConfig& cfg, const BenchOptions& options = {});

double mean_of(const std::vector<double>& xs);
double sample_stddev(const std::vector<double>& xs);

/// Mean over query nodes of the fraction of their k cosine nearest
/// neighbours sharing their label. Self is excluded and ties go to the lower
/// index. `nodes` restricts both queries and candidates; empty means all.
double sim_at_k(const DenseMatrix& z, const std::vector<std::uint32_t>& label_ids, std::size_t k,
                const IndexSet& nodes = {});

struct DegreeBucket {
  std::size_t lower = 0;                // degree >= lower
  std::optional<std::size_t> upper;     // degree < upper, open when empty
  std::size_t population = 0;
  std::size_t correct = 0;
  std::optional<double> accuracy;       // empty bucket has no accuracy
};

struct DegreeReport {
  std::vector<std::size_t> boundaries;
  std::vector<DegreeBucket> buckets;
};

DegreeReport degree_accuracy(const GraphDataset& ds, const std::vector<std::uint32_t>& predicted,
                             const IndexSet& test_set, const std::vector<std::size_t>& boundaries);
DegreeReport degree_accuracy_report(const GraphDataset& ds, const Model& model,
                                    const IndexSet& test_set,
                                    const std::vector<std::size_t>& boundaries,
                                    bool feature_row_normalize = true);

struct AblationRow {
  std::string name;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  BenchReport report;
};

/// Four benchmarks differing only in the loss weights: full, lambda1 = 0,
/// lambda2 = 0 and lambda1 = lambda2 = 0. All rows share splits and seeds.
std::vector<AblationRow> ablation_suite(const GraphDataset& ds, double label_rate,
                                        std::size_t n_splits, const TrainConfig& base_cfg,
                                        const BenchOptions& options = {});

std::string format_real(double v);

std::string bench_csv(const BenchReport& report);
std::string bench_json(const BenchReport& report);
std::string degree_csv(const DegreeReport& report);
std::string degree_json(const DegreeReport& report);
std::string ablation_csv(const std::vector<AblationRow>& rows);
std::string ablation_json(const std::vector<AblationRow>& rows);

}  // namespace grafn
