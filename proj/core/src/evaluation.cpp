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

#include "grafn/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <thread>

#include "grafn/config.hpp"
#include "grafn/kernels.hpp"

namespace grafn {

namespace {

nlohmann::ordered_json config_json(const TrainConfig& cfg) {
  nlohmann::ordered_json j;
  for (const auto& [key, value] : config_items(cfg)) j[key] = value;
  return j;
}

nlohmann::ordered_json bench_json_value(const BenchReport& r) {
  nlohmann::ordered_json j;
  j["dataset"] = r.dataset;
  j["label_rate"] = r.label_rate;
  j["n_splits"] = r.splits.size();
  j["mean"] = r.mean;
  j["stddev"] = r.stddev;
  auto acc = nlohmann::ordered_json::array();
  for (const SplitOutcome& s : r.splits) acc.push_back(s.test_accuracy);
  j["test_accuracies"] = acc;
  auto seeds = nlohmann::ordered_json::array();
  for (const SplitOutcome& s : r.splits) seeds.push_back(s.seed);
  j["split_seeds"] = seeds;
  j["config_fingerprint"] = r.config_fingerprint;
  j["config"] = config_json(r.config);
  return j;
}

}  // namespace

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

BenchReport run_benchmark(const GraphDataset& ds, double label_rate, std::size_t n_splits,
                          const TrainConfig& cfg, const BenchOptions& options) {
  if (n_splits == 0) fail(ErrorKind::kUsage, "run_benchmark: n_splits must be positive");
  cfg.validate();
  const std::vector<SplitSpec> splits = generate_splits(ds, label_rate, n_splits, options.base_seed);

  std::vector<std::optional<RunResult>> results(n_splits);
  std::vector<std::exception_ptr> errors(n_splits);
  std::atomic<std::size_t> next{0};
  std::mutex observe_mutex;
  std::size_t observed = 0;

  // Observers see splits in order: each finished run flushes every ready
  // prefix result.
  auto flush = [&] {
    while (observed < n_splits && (results[observed] || errors[observed])) {
      if (results[observed] && options.observer) {
        options.observer(observed, splits[observed], *results[observed]);
      }
      ++observed;
    }
  };
  auto worker = [&] {
    for (std::size_t i = next++; i < n_splits; i = next++) {
      std::optional<RunResult> r;
      std::exception_ptr err;
      try {
        r = fit(ds, splits[i], cfg);
      } catch (...) {
        err = std::current_exception();
      }
      std::lock_guard<std::mutex> lock(observe_mutex);
      results[i] = std::move(r);
      errors[i] = err;
      if (err) next = n_splits;  // stop handing out work
      flush();
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, n_splits);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < n_splits; ++i) {
    if (!errors[i]) continue;
    const std::string where = "split seed " + std::to_string(splits[i].seed) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      fail(e.kind(), where + e.what());
    } catch (const std::exception& e) {
      fail(ErrorKind::kNumerical, where + e.what());
    }
  }

  BenchReport report;
  report.dataset = ds.name;
  report.label_rate = label_rate;
  report.config = cfg;
  report.config_fingerprint = config_fingerprint(cfg);
  std::vector<double> acc;
  for (std::size_t i = 0; i < n_splits; ++i) {
    const RunResult& r = *results[i];
    report.splits.push_back(
        {splits[i].seed, r.test_accuracy_at_best_val, r.best_val_accuracy, r.epoch_of_best});
    acc.push_back(r.test_accuracy_at_best_val);
  }
  report.mean = mean_of(acc);
  report.stddev = sample_stddev(acc);
  return report;
}

double sim_at_k(const DenseMatrix& z, const std::vector<std::uint32_t>& label_ids, std::size_t k,
                const IndexSet& nodes) {
  if (label_ids.size() != z.rows()) {
    fail(ErrorKind::kShape, "sim_at_k: " + std::to_string(label_ids.size()) + " labels for " +
                                std::to_string(z.rows()) + " embeddings");
  }
  IndexSet pool = nodes;
  if (pool.empty()) {
    pool.resize(z.rows());
    std::iota(pool.begin(), pool.end(), 0u);
  }
  std::sort(pool.begin(), pool.end());
  if (k == 0) fail(ErrorKind::kUsage, "sim_at_k: k must be positive");
  if (k >= pool.size()) {
    fail(ErrorKind::kUsage, "sim_at_k: k = " + std::to_string(k) + " needs more than " +
                                std::to_string(pool.size()) + " nodes");
  }
  DenseMatrix zn(pool.size(), z.cols());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto src = z.row(pool[i]);
    std::copy(src.begin(), src.end(), zn.row(i).begin());
  }
  zn = row_l2_normalize(zn);

  constexpr std::size_t kBlock = 256;
  double total = 0.0;
  std::vector<std::uint32_t> order(pool.size());
  for (std::size_t b0 = 0; b0 < pool.size(); b0 += kBlock) {
    const std::size_t b1 = std::min(pool.size(), b0 + kBlock);
    DenseMatrix q(b1 - b0, zn.cols());
    std::copy(zn.values().begin() + static_cast<std::ptrdiff_t>(b0 * zn.cols()),
              zn.values().begin() + static_cast<std::ptrdiff_t>(b1 * zn.cols()),
              q.values().begin());
    const DenseMatrix sims = matmul_nt(q, zn);
    for (std::size_t qi = b0; qi < b1; ++qi) {
      const auto row = sims.row(qi - b0);
      order.clear();
      for (std::uint32_t j = 0; j < pool.size(); ++j) {
        if (j != qi) order.push_back(j);
      }
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                        [&](std::uint32_t a, std::uint32_t b) {
                          return row[a] != row[b] ? row[a] > row[b] : a < b;
                        });
      std::size_t same = 0;
      const std::uint32_t label = label_ids[pool[qi]];
      for (std::size_t r = 0; r < k; ++r) same += label_ids[pool[order[r]]] == label ? 1 : 0;
      total += static_cast<double>(same) / static_cast<double>(k);
    }
  }
  return total / static_cast<double>(pool.size());
}

DegreeReport degree_accuracy(const GraphDataset& ds, const std::vector<std::uint32_t>& predicted,
                             const IndexSet& test_set, const std::vector<std::size_t>& boundaries) {
  const std::vector<std::size_t> bucket = degree_buckets(ds, boundaries);
  DegreeReport report;
  report.boundaries = boundaries;
  report.buckets.resize(boundaries.size() + 1);
  for (std::size_t b = 0; b < report.buckets.size(); ++b) {
    report.buckets[b].lower = b == 0 ? 0 : boundaries[b - 1];
    if (b < boundaries.size()) report.buckets[b].upper = boundaries[b];
  }
  for (std::uint32_t i : test_set) {
    DegreeBucket& db = report.buckets.at(bucket.at(i));
    ++db.population;
    db.correct += predicted.at(i) == ds.label_ids.at(i) ? 1 : 0;
  }
  for (DegreeBucket& db : report.buckets) {
    if (db.population > 0) {
      db.accuracy = static_cast<double>(db.correct) / static_cast<double>(db.population);
    }
  }
  return report;
}

DegreeReport degree_accuracy_report(const GraphDataset& ds, const Model& model,
                                    const IndexSet& test_set,
                                    const std::vector<std::size_t>& boundaries,
                                    bool feature_row_normalize) {
  const PreparedGraph g = prepare_graph(ds, feature_row_normalize);
  return degree_accuracy(ds, predict(model, g.norm_adj, g.features), test_set, boundaries);
}

std::vector<AblationRow> ablation_suite(const GraphDataset& ds, double label_rate,
                                        std::size_t n_splits, const TrainConfig& base_cfg,
                                        const BenchOptions& options) {
  struct Variant {
    const char* name;
    bool keep1;
    bool keep2;
  };
  constexpr Variant variants[] = {
      {"full", true, true}, {"no_nc", false, true}, {"no_lc", true, false}, {"supervised", false, false}};
  std::vector<AblationRow> rows;
  for (const Variant& v : variants) {
    TrainConfig cfg = base_cfg;
    if (!v.keep1) cfg.loss.lambda1 = 0.0;
    if (!v.keep2) cfg.loss.lambda2 = 0.0;
    rows.push_back({v.name, cfg.loss.lambda1, cfg.loss.lambda2,
                    run_benchmark(ds, label_rate, n_splits, cfg, options)});
  }
  return rows;
}

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string bench_csv(const BenchReport& report) {
  std::string out = "split,seed,test_accuracy,best_val_accuracy,epoch_of_best\n";
  for (std::size_t i = 0; i < report.splits.size(); ++i) {
    const SplitOutcome& s = report.splits[i];
    out += std::to_string(i) + "," + std::to_string(s.seed) + "," + format_real(s.test_accuracy) +
           "," + format_real(s.best_val_accuracy) + "," + std::to_string(s.epoch_of_best) + "\n";
  }
  return out;
}

std::string bench_json(const BenchReport& report) { return bench_json_value(report).dump(2) + "\n"; }

std::string degree_csv(const DegreeReport& report) {
  std::string out = "bucket,min_degree,max_degree_exclusive,population,correct,accuracy\n";
  for (std::size_t b = 0; b < report.buckets.size(); ++b) {
    const DegreeBucket& db = report.buckets[b];
    out += std::to_string(b) + "," + std::to_string(db.lower) + "," +
           (db.upper ? std::to_string(*db.upper) : "") + "," + std::to_string(db.population) + "," +
           std::to_string(db.correct) + "," + (db.accuracy ? format_real(*db.accuracy) : "") + "\n";
  }
  return out;
}

std::string degree_json(const DegreeReport& report) {
  nlohmann::ordered_json j;
  j["boundaries"] = report.boundaries;
  auto buckets = nlohmann::ordered_json::array();
  for (const DegreeBucket& db : report.buckets) {
    nlohmann::ordered_json b;
    b["min_degree"] = db.lower;
    b["max_degree_exclusive"] = db.upper ? nlohmann::ordered_json(*db.upper) : nullptr;
    b["population"] = db.population;
    b["correct"] = db.correct;
    b["accuracy"] = db.accuracy ? nlohmann::ordered_json(*db.accuracy) : nullptr;
    buckets.push_back(b);
  }
  j["buckets"] = buckets;
  return j.dump(2) + "\n";
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "variant,lambda1,lambda2,mean,stddev,n_splits\n";
  for (const AblationRow& r : rows) {
    out += r.name + "," + format_real(r.lambda1) + "," + format_real(r.lambda2) + "," +
           format_real(r.report.mean) + "," + format_real(r.report.stddev) + "," +
           std::to_string(r.report.splits.size()) + "\n";
  }
  return out;
}

std::string ablation_json(const std::vector<AblationRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const AblationRow& r : rows) {
    nlohmann::ordered_json j;
    j["variant"] = r.name;
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["report"] = bench_json_value(r.report);
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace grafn
