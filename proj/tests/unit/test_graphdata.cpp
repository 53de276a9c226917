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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "grafn/error.hpp"
#include "grafn/graphdata.hpp"
#include "testing.hpp"

using namespace grafn;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

GraphDataset path_graph(std::size_t n, std::size_t classes) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i % classes);
  return make_dataset("path", n, edges, DenseMatrix(n, 2, 1.0), labels, classes);
}

// Cora-shaped class sizes without the graph.
GraphDataset sized_dataset(const std::vector<std::size_t>& class_sizes) {
  std::vector<std::uint32_t> labels;
  for (std::size_t k = 0; k < class_sizes.size(); ++k) {
    labels.insert(labels.end(), class_sizes[k], static_cast<std::uint32_t>(k));
  }
  const std::size_t n = labels.size();
  return make_dataset("sized", n, {}, DenseMatrix(n, 1, 1.0), labels, class_sizes.size());
}

}  // namespace

TEST_CASE("convert reads content and cites files") {
  const fs::path dir = grafn::testing::scratch_dir("convert");
  write_file(dir / "toy.content",
             "p1 1 0 1 beta\n"
             "p2 0 1 0 alpha\n"
             "p3 1 1 0 beta\n");
  write_file(dir / "toy.cites",
             "p1 p2\n"
             "p2 p1\n"   // duplicate of the first pair
             "p3 p3\n"   // self-loop
             "p2 p9\n"   // unknown id
             "p3 p1\n");
  const ConvertSummary s =
      convert_content_cites(dir / "toy.content", dir / "toy.cites", dir / "out", "toy");
  CHECK(s.nodes == 3);
  CHECK(s.features == 3);
  CHECK(s.classes == 2);
  CHECK(s.cite_lines == 5);
  CHECK(s.dangling == 1);
  CHECK(s.edges == 2);
  CHECK(s.duplicates == 1);
  CHECK(s.self_loops == 1);
  CHECK(s.class_names == std::vector<std::string>{"alpha", "beta"});

  const GraphDataset ds = load_dataset(dir / "out");
  CHECK(ds.name == "toy");
  CHECK(ds.num_nodes() == 3);
  CHECK(ds.num_features() == 3);
  CHECK(ds.label_ids == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(ds.features(1, 1) == 1.0);
  CHECK(ds.adj.nnz() == 4);
  CHECK(ds.adj.is_symmetric());
  fs::remove_all(dir);
}

TEST_CASE("convert rejects malformed content") {
  const fs::path dir = grafn::testing::scratch_dir("convert_bad");
  write_file(dir / "c", "p1 1 0 a\np2 1 b\n");
  write_file(dir / "e", "");
  try {
    convert_content_cites(dir / "c", dir / "e", dir / "out");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kData);
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  write_file(dir / "c", "p1 1 0 a\np1 1 0 b\n");
  CHECK_THROWS_AS(convert_content_cites(dir / "c", dir / "e", dir / "out"), Error);
  write_file(dir / "c", "p1 1 x a\n");
  CHECK_THROWS_AS(convert_content_cites(dir / "c", dir / "e", dir / "out"), Error);
  CHECK_THROWS_AS(convert_content_cites(dir / "missing", dir / "e", dir / "out"), Error);
  fs::remove_all(dir);
}

TEST_CASE("save and load round trip") {
  const GraphDataset ds = random_dataset(30, 4, 3, 0.2, 5);
  const fs::path dir = grafn::testing::scratch_dir("roundtrip");
  save_dataset(ds, dir);
  const GraphDataset back = load_dataset(dir);
  CHECK(back.name == ds.name);
  CHECK(back.features == ds.features);
  CHECK(back.labels == ds.labels);
  CHECK(back.label_ids == ds.label_ids);
  CHECK(back.adj.to_dense() == ds.adj.to_dense());
  CHECK(back.summary.undirected_edges == ds.summary.undirected_edges);

  // truncated features
  write_file(dir / "features.tsv", "1\t2\t3\t4\n");
  CHECK_THROWS_AS(load_dataset(dir), Error);
  CHECK_THROWS_AS(load_dataset(dir / "nope"), Error);
  fs::remove_all(dir);
}

TEST_CASE("make_dataset validates its inputs") {
  CHECK_THROWS_AS(make_dataset("x", 2, {{0, 2}}, DenseMatrix(2, 1), {0, 0}, 1), Error);
  CHECK_THROWS_AS(make_dataset("x", 2, {}, DenseMatrix(2, 1), {0, 1}, 1), Error);
  CHECK_THROWS_AS(make_dataset("x", 2, {}, DenseMatrix(2, 1), {0}, 1), Error);
  DenseMatrix bad(2, 1);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(make_dataset("x", 2, {}, bad, {0, 0}, 1), Error);
}

TEST_CASE("normalized adjacency of two connected nodes is all one half") {
  const GraphDataset ds = make_dataset("pair", 2, {{0, 1}}, DenseMatrix(2, 1), {0, 0}, 1);
  const DenseMatrix a = normalize_adjacency(ds.adj).to_dense();
  for (double v : a.values()) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normalized adjacency of a star") {
  // hub 0 with 7 leaves: hub degree 8, leaf degree 2
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t i = 1; i <= 7; ++i) edges.emplace_back(0, i);
  const GraphDataset ds = make_dataset("star", 8, edges, DenseMatrix(8, 1), std::vector<std::uint32_t>(8, 0), 1);
  const DenseMatrix a = normalize_adjacency(ds.adj).to_dense();
  CHECK(a(0, 0) == doctest::Approx(1.0 / 8.0));
  CHECK(a(0, 3) == doctest::Approx(1.0 / std::sqrt(16.0)));
  CHECK(a(3, 3) == doctest::Approx(0.5));
  CHECK(a(2, 3) == 0.0);
  CHECK(degrees(ds.adj)[0] == 7);
  CHECK(degrees(ds.adj)[5] == 1);
}

TEST_CASE("normalized adjacency matches the dense formula") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const GraphDataset ds = random_dataset(25, 1, 2, 0.15, 100 + trial);
    const DenseMatrix a = ds.adj.to_dense();
    std::vector<double> deg(25, 1.0);
    for (std::size_t i = 0; i < 25; ++i) {
      for (std::size_t j = 0; j < 25; ++j) deg[i] += a(i, j);
    }
    const DenseMatrix got = normalize_adjacency(ds.adj).to_dense();
    for (std::size_t i = 0; i < 25; ++i) {
      for (std::size_t j = 0; j < 25; ++j) {
        const double want = (a(i, j) + (i == j ? 1.0 : 0.0)) / std::sqrt(deg[i] * deg[j]);
        CHECK(got(i, j) == doctest::Approx(want).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("splits at a Cora-like rate") {
  const GraphDataset ds = sized_dataset({351, 217, 418, 818, 426, 298, 180});
  REQUIRE(ds.num_nodes() == 2708);
  const auto splits = generate_splits(ds, 0.005, 5, 40);
  REQUIRE(splits.size() == 5);
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const SplitSpec& sp = splits[s];
    CHECK(sp.seed == 40 + s);
    CHECK(sp.labeled.size() == 14);
    std::set<std::uint32_t> classes;
    for (std::uint32_t i : sp.labeled) classes.insert(ds.label_ids[i]);
    CHECK(classes.size() == 7);
    const std::size_t rest = ds.num_nodes() - sp.labeled.size();
    CHECK(sp.val.size() + sp.test.size() == rest);
    CHECK(std::abs(static_cast<double>(sp.val.size()) - static_cast<double>(rest) / 10.0) <= 1.0);
    CHECK_NOTHROW(validate_split(sp, ds));
    CHECK(std::is_sorted(sp.labeled.begin(), sp.labeled.end()));
    const IndexSet unl = sp.unlabeled(ds.num_nodes());
    CHECK(unl.size() == rest);
  }
  CHECK(splits[0].labeled != splits[1].labeled);
  const auto again = generate_splits(ds, 0.005, 2, 40);
  CHECK(again[0].labeled == splits[0].labeled);
  CHECK(again[1].test == splits[1].test);
}

TEST_CASE("split errors") {
  const GraphDataset ds = path_graph(20, 4);
  CHECK_THROWS_AS(generate_splits(ds, 0.0, 1, 0), Error);
  CHECK_THROWS_AS(generate_splits(ds, 1.0, 1, 0), Error);
  CHECK_THROWS_AS(generate_splits(ds, 0.1, 1, 0), Error);  // 2 labeled < 4 classes
  CHECK(labeled_count(0.005, 2708) == 14);
  CHECK(labeled_count(0.01, 3327) == 33);

  SplitSpec sp = generate_splits(ds, 0.5, 1, 3)[0];
  SplitSpec overlap = sp;
  overlap.val.push_back(sp.labeled.front());
  CHECK_THROWS_AS(validate_split(overlap, ds), Error);
  SplitSpec range = sp;
  range.test.push_back(99);
  CHECK_THROWS_AS(validate_split(range, ds), Error);
  SplitSpec missing = sp;
  missing.labeled.erase(std::remove_if(missing.labeled.begin(), missing.labeled.end(),
                                       [&](std::uint32_t i) { return ds.label_ids[i] == 2; }),
                        missing.labeled.end());
  CHECK_THROWS_AS(validate_split(missing, ds), Error);
}

TEST_CASE("split JSON round trip") {
  const GraphDataset ds = path_graph(30, 3);
  const SplitSpec sp = generate_splits(ds, 0.2, 1, 9)[0];
  const SplitSpec back = split_from_json(split_to_json(sp));
  CHECK(back.labeled == sp.labeled);
  CHECK(back.val == sp.val);
  CHECK(back.test == sp.test);
  CHECK(back.seed == sp.seed);
  CHECK(back.label_rate == sp.label_rate);
  const fs::path dir = grafn::testing::scratch_dir("split");
  save_split(sp, dir / "s.json");
  CHECK(load_split(dir / "s.json").test == sp.test);
  CHECK_THROWS_AS(split_from_json("{\"labeled\": 3}"), Error);
  CHECK_THROWS_AS(split_from_json("not json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("degree buckets") {
  const GraphDataset ds = path_graph(5, 1);  // degrees 1 2 2 2 1
  CHECK(degree_buckets(ds, {2}) == std::vector<std::size_t>{0, 1, 1, 1, 0});
  CHECK(degree_buckets(ds, {1, 3}) == std::vector<std::size_t>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(degree_buckets(ds, {}), Error);
  CHECK_THROWS_AS(degree_buckets(ds, {2, 2}), Error);
}

TEST_CASE("random datasets are deterministic and cover all classes") {
  const GraphDataset a = random_dataset(40, 5, 4, 0.1, 3);
  const GraphDataset b = random_dataset(40, 5, 4, 0.1, 3);
  CHECK(a.features == b.features);
  CHECK(a.label_ids == b.label_ids);
  CHECK(a.adj.to_dense() == b.adj.to_dense());
  for (std::uint32_t k = 0; k < 4; ++k) {
    CHECK(std::count(a.label_ids.begin(), a.label_ids.end(), k) == 10);
  }
  CHECK_THROWS_AS(random_dataset(2, 1, 3, 0.5, 0), Error);
}
