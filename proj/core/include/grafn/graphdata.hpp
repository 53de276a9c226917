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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "grafn/dense.hpp"
#include "grafn/sparse.hpp"

namespace grafn {

using IndexSet = std::vector<std::uint32_t>;

struct LoadSummary {
  std::size_t edge_lines = 0;          // lines in graph.edges
  std::size_t undirected_edges = 0;    // unique unordered pairs kept
  std::size_t duplicate_edges = 0;     // repeated pairs collapsed
  std::size_t self_loops = 0;          // dropped
  std::optional<std::size_t> source_edge_lines;  // cite lines of the raw source, if recorded
};

/// Features X (N x F), one-hot labels Y (N x C) and the raw symmetric
/// adjacency A without self-loops.
struct GraphDataset {
  std::string name;
  SparseAdjacency adj;
  DenseMatrix features;
  DenseMatrix labels;
  std::size_t class_count = 0;
  std::vector<std::uint32_t> label_ids;  // argmax of each row of `labels`
  LoadSummary summary;

  std::size_t num_nodes() const noexcept { return features.rows(); }
  std::size_t num_features() const noexcept { return features.cols(); }

  /// Throws Error(kData) when any dataset invariant is violated.
  void validate() const;
};

/// Builds a dataset from in-memory parts; `edges` are undirected pairs.
GraphDataset make_dataset(std::string name, std::size_t num_nodes,
                          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                          DenseMatrix features, const std::vector<std::uint32_t>& labels,
                          std::size_t class_count);

/// Random test graph: each pair is an edge with probability `edge_prob`,
/// features are standard normal and labels cycle through all classes
/// before shuffling.
GraphDataset random_dataset(std::size_t num_nodes, std::size_t num_features,
                            std::size_t class_count, double edge_prob, std::uint64_t seed);

/// Reads graph.edges, features.tsv, labels.txt and meta.json from `dir`.
GraphDataset load_dataset(const std::filesystem::path& dir);

/// Writes `ds` in the directory format read by load_dataset.
void save_dataset(const GraphDataset& ds, const std::filesystem::path& dir);

struct ConvertSummary {
  std::size_t nodes = 0;
  std::size_t features = 0;
  std::size_t classes = 0;
  std::size_t cite_lines = 0;
  std::size_t edges = 0;  // undirected, deduplicated, without self-loops
  std::size_t dangling = 0;
  std::size_t duplicates = 0;
  std::size_t self_loops = 0;
  std::vector<std::string> class_names;
};

/// Converts `<id> <f_1 .. f_F> <class>` / `<cited> <citing>` files into the
/// directory format. Node order follows first appearance in `content`;
/// class names are indexed in lexicographic order. Cites that name an
/// unknown id are dropped and counted.
ConvertSummary convert_content_cites(const std::filesystem::path& content,
                                     const std::filesystem::path& cites,
                                     const std::filesystem::path& out,
                                     const std::string& name = {});

/// D^{-1/2} (A + I) D^{-1/2} with D the degree of A + I.
SparseAdjacency normalize_adjacency(const SparseAdjacency& a);

/// Raw degree (stored entries per row).
std::vector<std::size_t> degrees(const SparseAdjacency& a);

struct SplitSpec {
  IndexSet labeled;
  IndexSet val;
  IndexSet test;
  std::uint64_t seed = 0;
  double label_rate = 0.0;

  /// Complement of `labeled` over `num_nodes`, ascending.
  IndexSet unlabeled(std::size_t num_nodes) const;
};

/// Stratified labeled sampling (one node per class first, the rest
/// apportioned by class frequency with largest remainders) followed by a
/// 1:9 val:test split of the remaining nodes. Split i uses base_seed + i.
std::vector<SplitSpec> generate_splits(const GraphDataset& ds, double label_rate,
                                       std::size_t n_splits, std::uint64_t base_seed);

/// Number of labeled nodes a rate produces: round(rate * N).
std::size_t labeled_count(double label_rate, std::size_t num_nodes);

/// Checks disjointness, class coverage and index ranges.
void validate_split(const SplitSpec& split, const GraphDataset& ds);

std::string split_to_json(const SplitSpec& split);
SplitSpec split_from_json(const std::string& text);
void save_split(const SplitSpec& split, const std::filesystem::path& file);
SplitSpec load_split(const std::filesystem::path& file);

/// Bucket id = number of boundaries b with degree >= b. Boundaries must be
/// strictly increasing and non-empty.
std::vector<std::size_t> degree_buckets(const GraphDataset& ds,
                                        const std::vector<std::size_t>& boundaries);

}  // namespace grafn
