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

#include "grafn/graphdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "grafn/error.hpp"
#include "grafn/rng.hpp"
#include "json.hpp"

namespace grafn {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

[[noreturn]] void data_error(const fs::path& file, std::size_t line, const std::string& msg) {
  fail(ErrorKind::kData, file.string() + ":" + std::to_string(line) + ": " + msg);
}

std::ifstream open_in(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kData, "cannot open " + file.string());
  return in;
}

std::ofstream open_out(const fs::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kData, "cannot write " + file.string());
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

SparseAdjacency symmetric_adjacency(std::size_t n, const EdgeList& unique_edges) {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets;
  triplets.reserve(unique_edges.size() * 2);
  for (const auto& [a, b] : unique_edges) {
    triplets.emplace_back(a, b, 1.0);
    triplets.emplace_back(b, a, 1.0);
  }
  return CsrMatrix::from_triplets(n, n, std::move(triplets));
}

// Canonical (min, max) pairs; drops self-loops and duplicates, counting both.
EdgeList dedupe_edges(const EdgeList& raw, std::size_t& duplicates, std::size_t& self_loops) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  EdgeList out;
  for (auto [a, b] : raw) {
    if (a == b) {
      ++self_loops;
      continue;
    }
    if (a > b) std::swap(a, b);
    if (!seen.emplace(a, b).second) {
      ++duplicates;
      continue;
    }
    out.emplace_back(a, b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void GraphDataset::validate() const {
  const std::size_t n = num_nodes();
  if (n == 0 || num_features() == 0 || class_count == 0) {
    fail(ErrorKind::kData, "dataset '" + name + "': N, F and C must be positive");
  }
  if (labels.rows() != n || labels.cols() != class_count || label_ids.size() != n) {
    fail(ErrorKind::kData, "dataset '" + name + "': label shape " + labels.shape() +
                               " inconsistent with N=" + std::to_string(n) +
                               ", C=" + std::to_string(class_count));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (double v : labels.row(i)) total += v;
    if (total != 1.0 || labels(i, label_ids[i]) != 1.0) {
      fail(ErrorKind::kData, "dataset '" + name + "': label row " + std::to_string(i) +
                                 " is not one-hot");
    }
  }
  if (adj.rows != n || adj.cols != n) {
    fail(ErrorKind::kData, "dataset '" + name + "': adjacency is not " + std::to_string(n) +
                               "x" + std::to_string(n));
  }
  adj.validate();
  for (std::size_t r = 0; r < n; ++r) {
    if (adj.at(r, r) != 0.0) {
      fail(ErrorKind::kData, "dataset '" + name + "': stored self-loop at " + std::to_string(r));
    }
  }
  for (double v : adj.values) {
    if (v < 0.0) fail(ErrorKind::kData, "dataset '" + name + "': negative adjacency weight");
  }
  if (!adj.is_symmetric()) fail(ErrorKind::kData, "dataset '" + name + "': asymmetric adjacency");
  if (!features.all_finite()) fail(ErrorKind::kData, "dataset '" + name + "': non-finite feature");
}

GraphDataset make_dataset(std::string name, std::size_t num_nodes, const EdgeList& edges,
                          DenseMatrix features, const std::vector<std::uint32_t>& labels,
                          std::size_t class_count) {
  GraphDataset ds;
  ds.name = std::move(name);
  for (const auto& [a, b] : edges) {
    if (a >= num_nodes || b >= num_nodes) {
      fail(ErrorKind::kData, "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                 ") references a node outside [0, " + std::to_string(num_nodes) +
                                 ")");
    }
  }
  ds.summary.edge_lines = edges.size();
  const EdgeList unique = dedupe_edges(edges, ds.summary.duplicate_edges, ds.summary.self_loops);
  ds.summary.undirected_edges = unique.size();
  ds.adj = symmetric_adjacency(num_nodes, unique);
  ds.features = std::move(features);
  ds.class_count = class_count;
  ds.labels = DenseMatrix(num_nodes, class_count);
  if (labels.size() != num_nodes) {
    fail(ErrorKind::kData, std::to_string(labels.size()) + " labels for " +
                               std::to_string(num_nodes) + " nodes");
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (labels[i] >= class_count) {
      fail(ErrorKind::kData, "label " + std::to_string(labels[i]) + " of node " +
                                 std::to_string(i) + " outside [0, " +
                                 std::to_string(class_count) + ")");
    }
    ds.labels(i, labels[i]) = 1.0;
  }
  ds.label_ids = labels;
  ds.validate();
  return ds;
}

GraphDataset load_dataset(const fs::path& dir) {
  const fs::path meta_file = dir / "meta.json";
  json meta;
  {
    std::ifstream in = open_in(meta_file);
    try {
      meta = json::parse(in);
    } catch (const json::exception& e) {
      fail(ErrorKind::kData, meta_file.string() + ": " + e.what());
    }
  }
  std::size_t n = 0, f = 0, c = 0;
  std::string name;
  try {
    name = meta.at("name").get<std::string>();
    n = meta.at("num_nodes").get<std::size_t>();
    f = meta.at("num_features").get<std::size_t>();
    c = meta.at("num_classes").get<std::size_t>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kData, meta_file.string() + ": " + e.what());
  }

  const fs::path feat_file = dir / "features.tsv";
  DenseMatrix features(n, f);
  {
    std::ifstream in = open_in(feat_file);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (row >= n) data_error(feat_file, row + 1, "more than num_nodes=" + std::to_string(n) + " rows");
      const auto tokens = split_ws(line);
      if (tokens.size() != f) {
        data_error(feat_file, row + 1, "expected " + std::to_string(f) + " values, got " +
                                           std::to_string(tokens.size()));
      }
      auto dst = features.row(row);
      for (std::size_t k = 0; k < f; ++k) {
        if (!parse_number(tokens[k], dst[k]) || !std::isfinite(dst[k])) {
          data_error(feat_file, row + 1, "bad real '" + std::string(tokens[k]) + "'");
        }
      }
      ++row;
    }
    if (row != n) data_error(feat_file, row, "expected " + std::to_string(n) + " rows");
  }

  const fs::path label_file = dir / "labels.txt";
  std::vector<std::uint32_t> labels;
  {
    std::ifstream in = open_in(label_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      std::uint32_t y = 0;
      if (tokens.size() != 1 || !parse_number(tokens[0], y)) {
        data_error(label_file, line_no, "expected one non-negative integer");
      }
      if (y >= c) {
        data_error(label_file, line_no, "label " + std::to_string(y) + " outside [0, " +
                                            std::to_string(c) + ")");
      }
      labels.push_back(y);
    }
    if (labels.size() != n) {
      data_error(label_file, line_no, "expected " + std::to_string(n) + " labels, got " +
                                          std::to_string(labels.size()));
    }
  }

  const fs::path edge_file = dir / "graph.edges";
  EdgeList edges;
  {
    std::ifstream in = open_in(edge_file);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      std::uint32_t a = 0, b = 0;
      if (tokens.size() != 2 || !parse_number(tokens[0], a) || !parse_number(tokens[1], b)) {
        data_error(edge_file, line_no, "expected 'src dst'");
      }
      if (a >= n || b >= n) {
        data_error(edge_file, line_no, "node index out of range [0, " + std::to_string(n) + ")");
      }
      edges.emplace_back(a, b);
    }
  }

  GraphDataset ds = make_dataset(name, n, edges, std::move(features), labels, c);
  if (meta.contains("source_edge_lines")) {
    ds.summary.source_edge_lines = meta["source_edge_lines"].get<std::size_t>();
  }
  return ds;
}

void save_dataset(const GraphDataset& ds, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out = open_out(dir / "graph.edges");
    for (std::size_t r = 0; r < ds.adj.rows; ++r) {
      for (std::size_t k = ds.adj.row_offsets[r]; k < ds.adj.row_offsets[r + 1]; ++k) {
        if (ds.adj.col_indices[k] > r) out << r << ' ' << ds.adj.col_indices[k] << '\n';
      }
    }
  }
  {
    std::ofstream out = open_out(dir / "features.tsv");
    std::string line;
    for (std::size_t r = 0; r < ds.num_nodes(); ++r) {
      line.clear();
      const auto row = ds.features.row(r);
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k > 0) line += '\t';
        line += format_double(row[k]);
      }
      line += '\n';
      out << line;
    }
  }
  {
    std::ofstream out = open_out(dir / "labels.txt");
    for (std::uint32_t y : ds.label_ids) out << y << '\n';
  }
  json meta = {{"name", ds.name},
               {"num_nodes", ds.num_nodes()},
               {"num_features", ds.num_features()},
               {"num_classes", ds.class_count}};
  if (ds.summary.source_edge_lines) meta["source_edge_lines"] = *ds.summary.source_edge_lines;
  std::ofstream out = open_out(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

ConvertSummary convert_content_cites(const fs::path& content, const fs::path& cites,
                                     const fs::path& out, const std::string& name) {
  std::unordered_map<std::string, std::uint32_t> node_of;
  std::vector<std::string> raw_classes;
  std::vector<std::vector<double>> rows;
  std::size_t arity = 0;
  {
    std::ifstream in = open_in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() < 3) data_error(content, line_no, "expected '<id> <features..> <class>'");
      const std::size_t f = tokens.size() - 2;
      if (rows.empty()) {
        arity = f;
      } else if (f != arity) {
        data_error(content, line_no, "inconsistent feature arity " + std::to_string(f) +
                                         " (expected " + std::to_string(arity) + ")");
      }
      const std::string id(tokens.front());
      if (!node_of.emplace(id, static_cast<std::uint32_t>(rows.size())).second) {
        data_error(content, line_no, "duplicate node id '" + id + "'");
      }
      std::vector<double> values(f);
      for (std::size_t k = 0; k < f; ++k) {
        if (!parse_number(tokens[k + 1], values[k]) || !std::isfinite(values[k])) {
          data_error(content, line_no, "bad feature value '" + std::string(tokens[k + 1]) + "'");
        }
      }
      rows.push_back(std::move(values));
      raw_classes.emplace_back(tokens.back());
    }
  }
  if (rows.empty()) fail(ErrorKind::kData, content.string() + ": no nodes");

  ConvertSummary summary;
  std::set<std::string> distinct(raw_classes.begin(), raw_classes.end());
  summary.class_names.assign(distinct.begin(), distinct.end());
  std::map<std::string, std::uint32_t> class_index;
  for (std::size_t k = 0; k < summary.class_names.size(); ++k) {
    class_index[summary.class_names[k]] = static_cast<std::uint32_t>(k);
  }

  EdgeList edges;
  {
    std::ifstream in = open_in(cites);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 2) data_error(cites, line_no, "expected '<cited> <citing>'");
      ++summary.cite_lines;
      const auto a = node_of.find(std::string(tokens[0]));
      const auto b = node_of.find(std::string(tokens[1]));
      if (a == node_of.end() || b == node_of.end()) {
        ++summary.dangling;
        continue;
      }
      edges.emplace_back(a->second, b->second);
    }
  }

  const std::size_t n = rows.size();
  DenseMatrix features(n, arity);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(rows[i].begin(), rows[i].end(), features.row(i).begin());
    labels[i] = class_index.at(raw_classes[i]);
  }
  std::string ds_name = name;
  if (ds_name.empty()) {
    ds_name = out.filename().string();
    if (ds_name.empty()) ds_name = out.parent_path().filename().string();
  }
  GraphDataset ds = make_dataset(ds_name, n, edges, std::move(features), labels,
                                 summary.class_names.size());
  ds.summary.source_edge_lines = summary.cite_lines;
  save_dataset(ds, out);

  summary.nodes = n;
  summary.features = arity;
  summary.classes = summary.class_names.size();
  summary.edges = ds.summary.undirected_edges;
  summary.duplicates = ds.summary.duplicate_edges;
  summary.self_loops = ds.summary.self_loops;
  return summary;
}

SparseAdjacency normalize_adjacency(const SparseAdjacency& a) {
  const std::size_t n = a.rows;
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triplets;
  triplets.reserve(a.nnz() + n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = a.row_offsets[r]; k < a.row_offsets[r + 1]; ++k) {
      if (a.col_indices[k] != r) {
        triplets.emplace_back(static_cast<std::uint32_t>(r), a.col_indices[k], a.values[k]);
      }
    }
    triplets.emplace_back(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r), 1.0);
  }
  SparseAdjacency out = CsrMatrix::from_triplets(n, n, std::move(triplets));
  std::vector<double> inv_sqrt(n);
  for (std::size_t r = 0; r < n; ++r) {
    double deg = 0.0;
    for (std::size_t k = out.row_offsets[r]; k < out.row_offsets[r + 1]; ++k) deg += out.values[k];
    inv_sqrt[r] = 1.0 / std::sqrt(deg);
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = out.row_offsets[r]; k < out.row_offsets[r + 1]; ++k) {
      out.values[k] *= inv_sqrt[r] * inv_sqrt[out.col_indices[k]];
    }
  }
  return out;
}

std::vector<std::size_t> degrees(const SparseAdjacency& a) {
  std::vector<std::size_t> deg(a.rows);
  for (std::size_t r = 0; r < a.rows; ++r) deg[r] = a.row_nnz(r);
  return deg;
}

IndexSet SplitSpec::unlabeled(std::size_t num_nodes) const {
  std::vector<bool> is_labeled(num_nodes, false);
  for (std::uint32_t i : labeled) is_labeled[i] = true;
  IndexSet out;
  out.reserve(num_nodes - labeled.size());
  for (std::uint32_t i = 0; i < num_nodes; ++i) {
    if (!is_labeled[i]) out.push_back(i);
  }
  return out;
}

std::size_t labeled_count(double label_rate, std::size_t num_nodes) {
  return static_cast<std::size_t>(std::llround(label_rate * static_cast<double>(num_nodes)));
}

std::vector<SplitSpec> generate_splits(const GraphDataset& ds, double label_rate,
                                       std::size_t n_splits, std::uint64_t base_seed) {
  const std::size_t n = ds.num_nodes();
  const std::size_t c = ds.class_count;
  if (!(label_rate > 0.0) || label_rate >= 1.0) {
    fail(ErrorKind::kUsage, "label rate " + std::to_string(label_rate) + " outside (0, 1)");
  }
  const std::size_t n_labeled = labeled_count(label_rate, n);
  if (n_labeled < c) {
    fail(ErrorKind::kUsage, "label rate " + std::to_string(label_rate) + " gives " +
                                std::to_string(n_labeled) + " labeled nodes, fewer than the " +
                                std::to_string(c) + " classes");
  }
  std::vector<IndexSet> members(c);
  for (std::uint32_t i = 0; i < n; ++i) members[ds.label_ids[i]].push_back(i);
  for (std::size_t k = 0; k < c; ++k) {
    if (members[k].empty()) {
      fail(ErrorKind::kData, "class " + std::to_string(k) + " has no nodes; cannot stratify");
    }
  }
  if (n_labeled >= n) fail(ErrorKind::kUsage, "label rate leaves no unlabeled nodes");

  // One per class, then largest-remainder apportionment of the rest.
  std::vector<std::size_t> alloc(c, 1);
  std::size_t remaining = n_labeled - c;
  std::vector<double> remainder(c);
  for (std::size_t k = 0; k < c; ++k) {
    const double quota = static_cast<double>(n_labeled - c) * static_cast<double>(members[k].size()) /
                         static_cast<double>(n);
    const auto whole = std::min(static_cast<std::size_t>(std::floor(quota)), members[k].size() - 1);
    alloc[k] += whole;
    remaining -= whole;
    remainder[k] = quota - std::floor(quota);
  }
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  while (remaining > 0) {
    bool progressed = false;
    for (std::size_t k : order) {
      if (remaining == 0) break;
      if (alloc[k] < members[k].size()) {
        ++alloc[k];
        --remaining;
        progressed = true;
      }
    }
    if (!progressed) break;
  }

  std::vector<SplitSpec> splits;
  splits.reserve(n_splits);
  for (std::size_t s = 0; s < n_splits; ++s) {
    SplitSpec split;
    split.seed = base_seed + s;
    split.label_rate = label_rate;
    Rng rng(split.seed);
    std::vector<bool> taken(n, false);
    for (std::size_t k = 0; k < c; ++k) {
      IndexSet pool = members[k];
      rng.shuffle(std::span<std::uint32_t>(pool));
      for (std::size_t j = 0; j < alloc[k]; ++j) {
        split.labeled.push_back(pool[j]);
        taken[pool[j]] = true;
      }
    }
    IndexSet rest;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (!taken[i]) rest.push_back(i);
    }
    rng.shuffle(std::span<std::uint32_t>(rest));
    const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(rest.size()) / 10.0));
    split.val.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_val), rest.end());
    std::sort(split.labeled.begin(), split.labeled.end());
    std::sort(split.val.begin(), split.val.end());
    std::sort(split.test.begin(), split.test.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

void validate_split(const SplitSpec& split, const GraphDataset& ds) {
  const std::size_t n = ds.num_nodes();
  std::vector<int> owner(n, -1);
  const IndexSet* sets[] = {&split.labeled, &split.val, &split.test};
  const char* names[] = {"labeled", "val", "test"};
  for (int s = 0; s < 3; ++s) {
    for (std::uint32_t i : *sets[s]) {
      if (i >= n) {
        fail(ErrorKind::kData, std::string("split: ") + names[s] + " index " + std::to_string(i) +
                                   " outside [0, " + std::to_string(n) + ")");
      }
      if (owner[i] != -1) {
        fail(ErrorKind::kData, "split: node " + std::to_string(i) + " in both " + names[owner[i]] +
                                   " and " + names[s]);
      }
      owner[i] = s;
    }
  }
  std::vector<bool> seen(ds.class_count, false);
  for (std::uint32_t i : split.labeled) seen[ds.label_ids[i]] = true;
  for (std::size_t k = 0; k < ds.class_count; ++k) {
    if (!seen[k]) fail(ErrorKind::kData, "split: class " + std::to_string(k) + " has no labeled node");
  }
}

std::string split_to_json(const SplitSpec& split) {
  json j = {{"seed", split.seed},
            {"label_rate", split.label_rate},
            {"labeled", split.labeled},
            {"val", split.val},
            {"test", split.test}};
  return j.dump() + "\n";
}

SplitSpec split_from_json(const std::string& text) {
  SplitSpec s;
  try {
    const json j = json::parse(text);
    s.seed = j.at("seed").get<std::uint64_t>();
    s.label_rate = j.at("label_rate").get<double>();
    s.labeled = j.at("labeled").get<IndexSet>();
    s.val = j.at("val").get<IndexSet>();
    s.test = j.at("test").get<IndexSet>();
  } catch (const json::exception& e) {
    fail(ErrorKind::kData, std::string("split JSON: ") + e.what());
  }
  return s;
}

void save_split(const SplitSpec& split, const fs::path& file) {
  std::ofstream out = open_out(file);
  out << split_to_json(split);
}

SplitSpec load_split(const fs::path& file) {
  std::ifstream in = open_in(file);
  std::stringstream buf;
  buf << in.rdbuf();
  return split_from_json(buf.str());
}

std::vector<std::size_t> degree_buckets(const GraphDataset& ds,
                                        const std::vector<std::size_t>& boundaries) {
  if (boundaries.empty()) fail(ErrorKind::kUsage, "degree_buckets: empty boundary list");
  for (std::size_t k = 1; k < boundaries.size(); ++k) {
    if (boundaries[k] <= boundaries[k - 1]) {
      fail(ErrorKind::kUsage, "degree_buckets: boundaries must be strictly increasing");
    }
  }
  const auto deg = degrees(ds.adj);
  std::vector<std::size_t> bucket(deg.size());
  for (std::size_t i = 0; i < deg.size(); ++i) {
    bucket[i] = static_cast<std::size_t>(
        std::upper_bound(boundaries.begin(), boundaries.end(), deg[i]) - boundaries.begin());
  }
  return bucket;
}

GraphDataset random_dataset(std::size_t num_nodes, std::size_t num_features,
                            std::size_t class_count, double edge_prob, std::uint64_t seed) {
  if (class_count == 0 || num_nodes < class_count) {
    fail(ErrorKind::kUsage, "random_dataset: need at least one node per class");
  }
  Rng rng(seed);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t a = 0; a < num_nodes; ++a) {
    for (std::uint32_t b = a + 1; b < num_nodes; ++b) {
      if (rng.bernoulli(edge_prob)) edges.emplace_back(a, b);
    }
  }
  DenseMatrix x(num_nodes, num_features);
  for (double& v : x.values()) v = rng.normal();
  std::vector<std::uint32_t> labels(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) labels[i] = static_cast<std::uint32_t>(i % class_count);
  rng.shuffle(std::span<std::uint32_t>(labels));
  return make_dataset("random", num_nodes, edges, std::move(x), labels, class_count);
}

}  // namespace grafn
