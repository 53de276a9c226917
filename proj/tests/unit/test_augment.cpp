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

#include "grafn/augment.hpp"
#include "grafn/error.hpp"
#include "testing.hpp"

using namespace grafn;
using grafn::testing::random_sparse_dense;

TEST_CASE("column masking zeroes whole feature columns") {
  Rng data_rng(1);
  const DenseMatrix x = grafn::testing::random_dense(10, 200, data_rng, 0.5, 1.0);
  Rng rng(2);
  const DenseMatrix m = mask_features(x, 0.3, rng);
  std::size_t masked = 0;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const bool zero = m(0, c) == 0.0;
    masked += zero;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      CHECK(m(r, c) == (zero ? 0.0 : x(r, c)));
    }
  }
  CHECK(masked > 30);
  CHECK(masked < 90);
}

TEST_CASE("entry masking only touches stored values") {
  Rng data_rng(3);
  const DenseMatrix x = random_sparse_dense(40, 40, 0.3, data_rng);
  Rng rng(4);
  const DenseMatrix m = mask_features(x, 0.5, rng, MaskMode::kEntry);
  for (std::size_t i = 0; i < x.values().size(); ++i) {
    const double v = m.values()[i];
    CHECK((v == 0.0 || v == x.values()[i]));
  }
}

TEST_CASE("CSR and dense masking agree for the same stream") {
  Rng data_rng(5);
  const DenseMatrix x = random_sparse_dense(30, 25, 0.4, data_rng);
  const CsrMatrix xs = CsrMatrix::from_dense(x);
  Rng a(9), b(9);
  CHECK(mask_features(xs, 0.4, a).to_dense() == mask_features(x, 0.4, b));
  Rng c(9), d(9);
  CHECK(mask_features(xs, 0.4, c, MaskMode::kEntry).to_dense() ==
        mask_features(x, 0.4, d, MaskMode::kEntry));
}

TEST_CASE("mask probability edge cases") {
  const DenseMatrix x(3, 4, 2.0);
  Rng rng(0);
  CHECK(mask_features(x, 0.0, rng) == x);
  CHECK_THROWS_AS(mask_features(x, 1.0, rng), Error);
  CHECK_THROWS_AS(mask_features(x, -0.1, rng), Error);
  CHECK_THROWS_AS(mask_features(x, 1.5, rng), Error);
}

TEST_CASE("edge dropping keeps symmetry and removes edges in pairs") {
  const GraphDataset ds = random_dataset(60, 1, 2, 0.2, 8);
  Rng rng(10);
  const SparseAdjacency d = drop_edges(ds.adj, 0.5, rng);
  CHECK(d.is_symmetric());
  CHECK(d.nnz() % 2 == 0);
  CHECK(d.nnz() < ds.adj.nnz());
  const DenseMatrix full = ds.adj.to_dense();
  const DenseMatrix kept = d.to_dense();
  for (std::size_t i = 0; i < full.values().size(); ++i) {
    CHECK((kept.values()[i] == 0.0 || kept.values()[i] == full.values()[i]));
  }
  const double rate = static_cast<double>(d.nnz()) / static_cast<double>(ds.adj.nnz());
  CHECK(rate == doctest::Approx(0.5).epsilon(0.15));

  Rng r0(1);
  CHECK(drop_edges(ds.adj, 0.0, r0).to_dense() == full);
  CHECK(drop_edges(ds.adj, 0.999999, r0).nnz() < ds.adj.nnz() / 10);

  const SparseAdjacency asym =
      CsrMatrix::from_triplets(2, 2, {{0, 1, 1.0}});
  CHECK_THROWS_AS(drop_edges(asym, 0.5, r0), Error);
}

TEST_CASE("augmented views are deterministic and normalized") {
  const GraphDataset ds = random_dataset(30, 6, 3, 0.2, 12);
  const CsrMatrix x = CsrMatrix::from_dense(ds.features);
  const AugmentConfig cfg{0.3, 0.3};
  Rng a(77), b(77);
  const GraphView va = augment_view(ds.adj, x, cfg, a);
  const GraphView vb = augment_view(ds.adj, x, cfg, b);
  CHECK(va.adj.to_dense() == vb.adj.to_dense());
  CHECK(va.features.to_dense() == vb.features.to_dense());
  // every node keeps its self-loop
  for (std::size_t i = 0; i < 30; ++i) CHECK(va.adj.at(i, i) > 0.0);

  Rng c(77);
  const auto [adj, dense] = augment_view(ds, cfg, c);
  CHECK(adj.to_dense() == va.adj.to_dense());
  CHECK(dense == va.features.to_dense());

  Rng d(1);
  CHECK_THROWS_AS(augment_view(ds.adj, x, AugmentConfig{2.0, 0.0}, d), Error);
}
