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

// grafn command-line tool.
//
// Exit codes: 0 success, 2 usage or config error, 3 data error,
// 4 numerical failure (divergence, failed gradient check).

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grafn/config.hpp"
#include "grafn/evaluation.hpp"
#include "grafn/graphdata.hpp"
#include "grafn/model.hpp"
#include "grafn/runtime.hpp"
#include "grafn/trainer.hpp"

namespace fs = std::filesystem;
using namespace grafn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kData:
    case ErrorKind::kShape:
      return kExitData;
    case ErrorKind::kNumerical:
      return kExitNumerical;
  }
  return kExitUsage;
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kUsage, "cannot write " + file.string());
  out << text;
  if (!out) fail(ErrorKind::kUsage, "write failed: " + file.string());
}

// Dataset argument: an existing directory, or a name under $GRAFN_DATA_DIR.
fs::path resolve_dataset(const std::string& arg) {
  if (arg.empty()) {
    fail(ErrorKind::kUsage, "no dataset given (--data or 'data' config key)");
  }
  if (fs::is_directory(arg)) return arg;
  if (const char* root = std::getenv("GRAFN_DATA_DIR"); root != nullptr && fs::path(arg).is_relative()) {
    const fs::path candidate = fs::path(root) / arg;
    if (fs::is_directory(candidate)) return candidate;
  }
  fail(ErrorKind::kData, "dataset directory not found: " + arg);
}

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) fail(ErrorKind::kData, std::string(what) + " not found: " + path);
}

// Options shared by every command that trains.
struct TrainingOptions {
  std::string config_file;
  std::string data;
  std::vector<std::string> sets;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<std::size_t> epochs;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "Config file (flat key = value)");
    cmd->add_option("-d,--data", data, "Dataset directory or name under $GRAFN_DATA_DIR");
    cmd->add_option("--set", sets, "Override one config key: key=value (repeatable)");
    cmd->add_option("--lambda1", lambda1, "Node-wise consistency weight");
    cmd->add_option("--lambda2", lambda2, "Label-guided consistency weight");
    cmd->add_option("--epochs", epochs, "max_epochs override");
  }

  // File entries first, then --set, then the dedicated flags.
  TrainConfig resolve() {
    TrainConfig cfg;
    if (!config_file.empty()) {
      for (const ConfigEntry& e : read_key_values(config_file)) {
        if (e.key == "data") {
          if (data.empty()) data = e.value;
        } else {
          apply_config_entry(cfg, e.key, e.value);
        }
      }
    }
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(ErrorKind::kUsage, "--set expects key=value, got " + s);
      apply_config_entry(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (lambda1) cfg.loss.lambda1 = *lambda1;
    if (lambda2) cfg.loss.lambda2 = *lambda2;
    if (epochs) cfg.max_epochs = *epochs;
    cfg.validate();
    return cfg;
  }
};

std::vector<std::size_t> parse_boundaries(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::kUsage, "bad degree boundary '" + item + "'");
    }
  }
  return out;
}

int cmd_convert(const std::string& content, const std::string& cites, const std::string& out,
                const std::string& name, bool force) {
  require_file(content, "content file");
  require_file(cites, "cites file");
  if (fs::exists(out) && !fs::is_empty(out) && !force) {
    fail(ErrorKind::kUsage, out + " exists and is not empty (use --force to overwrite)");
  }
  const ConvertSummary s = convert_content_cites(content, cites, out, name);
  std::printf("nodes=%zu features=%zu classes=%zu\n", s.nodes, s.features, s.classes);
  std::printf("cite_lines=%zu edges=%zu dangling=%zu duplicates=%zu self_loops=%zu\n",
              s.cite_lines, s.edges, s.dangling, s.duplicates, s.self_loops);
  return kExitOk;
}

int cmd_split(const std::string& data, double rate, std::size_t n, std::uint64_t seed,
              const std::string& out) {
  const GraphDataset ds = load_dataset(resolve_dataset(data));
  const std::vector<SplitSpec> splits = generate_splits(ds, rate, n, seed);
  fs::create_directories(out);
  for (std::size_t i = 0; i < splits.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "split_%03zu.json", i);
    save_split(splits[i], fs::path(out) / name);
  }
  std::printf("wrote %zu splits (%zu labeled, %zu val, %zu test) to %s\n", splits.size(),
              splits[0].labeled.size(), splits[0].val.size(), splits[0].test.size(), out.c_str());
  return kExitOk;
}

int cmd_train(TrainingOptions& opts, const std::string& split_file, const std::string& out) {
  const TrainConfig cfg = opts.resolve();
  require_file(split_file, "split file");
  const fs::path data_dir = resolve_dataset(opts.data);
  const GraphDataset ds = load_dataset(data_dir);
  const SplitSpec split = load_split(split_file);
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const RunResult r = fit(ds, split, cfg);
    write_text(fs::path(out) / "result.json", run_result_to_json(r, split, cfg));
    save_checkpoint(r.best_model, fs::path(out) / "model.ckpt");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("best_val=%.4f test=%.4f epoch=%zu time=%.1fs\n", r.best_val_accuracy,
                r.test_accuracy_at_best_val, r.epoch_of_best, secs);
  } catch (const DivergenceError& e) {
    write_text(fs::path(out) / "result.json", run_result_to_json(e.partial(), split, cfg));
    throw;
  }
  return kExitOk;
}

int cmd_eval(const std::string& data, const std::string& checkpoint, const std::string& split_file,
             bool row_normalize) {
  require_file(checkpoint, "checkpoint");
  require_file(split_file, "split file");
  const GraphDataset ds = load_dataset(resolve_dataset(data));
  const Model model = load_checkpoint(checkpoint);
  const SplitSpec split = load_split(split_file);
  validate_split(split, ds);
  std::printf("val=%.4f test=%.4f\n", evaluate_accuracy(ds, model, split.val, row_normalize),
              evaluate_accuracy(ds, model, split.test, row_normalize));
  return kExitOk;
}

int cmd_bench(TrainingOptions& opts, double rate, std::size_t n, std::uint64_t seed,
              std::size_t jobs, const std::string& out) {
  const TrainConfig cfg = opts.resolve();
  const GraphDataset ds = load_dataset(resolve_dataset(opts.data));
  const BenchReport r = run_benchmark(ds, rate, n, cfg, {seed, jobs, {}});
  fs::create_directories(out);
  write_text(fs::path(out) / "bench.csv", bench_csv(r));
  write_text(fs::path(out) / "bench.json", bench_json(r));
  std::printf("%s rate=%s splits=%zu mean=%.4f std=%.4f\n", r.dataset.c_str(),
              format_real(rate).c_str(), r.splits.size(), r.mean, r.stddev);
  return kExitOk;
}

int cmd_simsearch(const std::string& data, const std::string& checkpoint,
                  const std::vector<std::size_t>& ks, const std::string& split_file,
                  bool row_normalize) {
  require_file(checkpoint, "checkpoint");
  const GraphDataset ds = load_dataset(resolve_dataset(data));
  const Model model = load_checkpoint(checkpoint);
  IndexSet nodes;
  if (!split_file.empty()) {
    require_file(split_file, "split file");
    nodes = load_split(split_file).test;
  }
  const PreparedGraph g = prepare_graph(ds, row_normalize);
  const DenseMatrix z = embed(model.encoder, g.norm_adj, g.features);
  for (std::size_t k : ks) std::printf("sim@%zu=%.4f\n", k, sim_at_k(z, ds.label_ids, k, nodes));
  return kExitOk;
}

int cmd_degree_report(const std::string& data, const std::string& checkpoint,
                      const std::string& split_file, const std::string& boundaries,
                      const std::string& out, bool row_normalize) {
  require_file(checkpoint, "checkpoint");
  require_file(split_file, "split file");
  const GraphDataset ds = load_dataset(resolve_dataset(data));
  const Model model = load_checkpoint(checkpoint);
  const SplitSpec split = load_split(split_file);
  validate_split(split, ds);
  const DegreeReport r =
      degree_accuracy_report(ds, model, split.test, parse_boundaries(boundaries), row_normalize);
  std::fputs(degree_csv(r).c_str(), stdout);
  if (!out.empty()) {
    write_text(fs::path(out) / "degree.csv", degree_csv(r));
    write_text(fs::path(out) / "degree.json", degree_json(r));
  }
  return kExitOk;
}

int cmd_ablate(TrainingOptions& opts, double rate, std::size_t n, std::uint64_t seed,
               std::size_t jobs, const std::string& out) {
  const TrainConfig cfg = opts.resolve();
  const GraphDataset ds = load_dataset(resolve_dataset(opts.data));
  const std::vector<AblationRow> rows = ablation_suite(ds, rate, n, cfg, {seed, jobs, {}});
  fs::create_directories(out);
  write_text(fs::path(out) / "ablation.csv", ablation_csv(rows));
  write_text(fs::path(out) / "ablation.json", ablation_json(rows));
  std::fputs(ablation_csv(rows).c_str(), stdout);
  return kExitOk;
}

int cmd_gradcheck(TrainingOptions& opts, std::size_t size, std::uint64_t seed, double eps,
                  double tol) {
  TrainConfig cfg = opts.resolve();
  const std::size_t classes = 3;
  const GraphDataset ds = random_dataset(size, 8, classes, 0.2, seed);
  const SplitSpec split = generate_splits(ds, 0.3, 1, seed)[0];
  Model model = init_params({ds.num_features(), 6, 5, classes}, cfg.dropout, seed);
  model.encoder.center = cfg.center_embeddings;
  const auto t0 = std::chrono::steady_clock::now();
  const GradCheckReport r = check_objective_gradients(ds, split, model, cfg, mix_seed(seed, 7), eps);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("nodes=%zu nu=%s checked=%zu skipped=%zu max_rel_error=%.3e time=%.2fs\n", size,
              format_real(cfg.loss.nu).c_str(), r.checked, r.skipped, r.max_rel_error, secs);
  if (!r.worst_entry.empty()) std::printf("worst: %s\n", r.worst_entry.c_str());
  if (!(r.max_rel_error < tol) || r.checked == 0) {
    std::fprintf(stderr, "gradcheck failed: max relative error %.3e >= %.1e\n", r.max_rel_error, tol);
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_allocator();
  CLI::App app{"grafn: graph node classification with few labels"};
  app.require_subcommand(1);

  std::string content, cites, out, name, split_file, checkpoint, data;
  bool force = false;
  bool no_row_normalize = false;
  double rate = 0.0;
  std::size_t n = 20;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  auto* convert = app.add_subcommand("convert", "Convert .content/.cites files to a dataset directory");
  convert->add_option("--content", content, "Node file: <id> <features..> <class>")->required();
  convert->add_option("--cites", cites, "Edge file: <cited> <citing>")->required();
  convert->add_option("-o,--out", out, "Output dataset directory")->required();
  convert->add_option("--name", name, "Dataset name (default: output directory name)");
  convert->add_flag("--force", force, "Overwrite a non-empty output directory");

  auto* split = app.add_subcommand("split", "Generate stratified label splits");
  split->add_option("-d,--data", data, "Dataset directory or name")->required();
  split->add_option("--rate", rate, "Label rate, e.g. 0.005")->required();
  split->add_option("-n,--splits", n, "Number of splits");
  split->add_option("--seed", seed, "Base seed; split i uses seed + i");
  split->add_option("-o,--out", out, "Output directory")->required();

  TrainingOptions train_opts;
  auto* train = app.add_subcommand("train", "Train on one split");
  train_opts.attach(train);
  train->add_option("--split", split_file, "Split JSON file")->required();
  train->add_option("-o,--out", out, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Accuracy of a checkpoint on a split");
  eval->add_option("-d,--data", data, "Dataset directory or name")->required();
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval->add_option("--split", split_file, "Split JSON file")->required();
  eval->add_flag("--no-row-normalize", no_row_normalize, "Use raw features");

  TrainingOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Train on n generated splits and aggregate");
  bench_opts.attach(bench);
  bench->add_option("--rate", rate, "Label rate")->required();
  bench->add_option("-n,--splits", n, "Number of splits");
  bench->add_option("--seed", seed, "Base split seed");
  bench->add_option("-j,--jobs", jobs, "Concurrent runs");
  bench->add_option("-o,--out", out, "Output directory")->required();

  std::vector<std::size_t> ks{5, 10};
  auto* simsearch = app.add_subcommand("simsearch", "Sim@K of clean-graph embeddings");
  simsearch->add_option("-d,--data", data, "Dataset directory or name")->required();
  simsearch->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  simsearch->add_option("-k", ks, "Neighbour counts")->delimiter(',');
  simsearch->add_option("--split", split_file, "Restrict to the test nodes of this split");
  simsearch->add_flag("--no-row-normalize", no_row_normalize, "Use raw features");

  std::string boundaries = "2,4,7";
  auto* degree = app.add_subcommand("degree-report", "Test accuracy per degree bucket");
  degree->add_option("-d,--data", data, "Dataset directory or name")->required();
  degree->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  degree->add_option("--split", split_file, "Split JSON file")->required();
  degree->add_option("--boundaries", boundaries, "Increasing degree boundaries");
  degree->add_option("-o,--out", out, "Also write degree.csv and degree.json here");
  degree->add_flag("--no-row-normalize", no_row_normalize, "Use raw features");

  TrainingOptions ablate_opts;
  auto* ablate = app.add_subcommand("ablate", "Benchmark with each consistency term removed");
  ablate_opts.attach(ablate);
  ablate->add_option("--rate", rate, "Label rate")->required();
  ablate->add_option("-n,--splits", n, "Number of splits");
  ablate->add_option("--seed", seed, "Base split seed");
  ablate->add_option("-j,--jobs", jobs, "Concurrent runs");
  ablate->add_option("-o,--out", out, "Output directory")->required();

  TrainingOptions grad_opts;
  std::size_t size = 20;
  double eps = 1e-5;
  double tol = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the training objective");
  grad_opts.attach(gradcheck);
  gradcheck->add_option("--size", size, "Nodes in the random graph");
  gradcheck->add_option("--seed", seed, "Seed of graph, parameters and views");
  gradcheck->add_option("--eps", eps, "Central-difference step");
  gradcheck->add_option("--tol", tol, "Maximum accepted relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*convert) return cmd_convert(content, cites, out, name, force);
    if (*split) return cmd_split(data, rate, n, seed, out);
    if (*train) return cmd_train(train_opts, split_file, out);
    if (*eval) return cmd_eval(data, checkpoint, split_file, !no_row_normalize);
    if (*bench) return cmd_bench(bench_opts, rate, n, seed, jobs, out);
    if (*simsearch) return cmd_simsearch(data, checkpoint, ks, split_file, !no_row_normalize);
    if (*degree) {
      return cmd_degree_report(data, checkpoint, split_file, boundaries, out, !no_row_normalize);
    }
    if (*ablate) return cmd_ablate(ablate_opts, rate, n, seed, jobs, out);
    if (*gradcheck) return cmd_gradcheck(grad_opts, size, seed, eps, tol);
  } catch (const Error& e) {
    std::fprintf(stderr, "grafn: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "grafn: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
