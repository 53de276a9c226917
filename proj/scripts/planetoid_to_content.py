#!/usr/bin/env python3
# Copyright 2026 The grafn Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Rewrite a Planetoid-format citation dataset (ind.<name>.*) as
<name>.content / <name>.cites so that `grafn convert` can ingest it.

Node order follows the usual Planetoid reconstruction: allx rows, then the
test rows placed at their sorted test indices. Test indices missing from
the pickle (Citeseer has 15) get an all-zero feature row and class 0.

    python3 scripts/planetoid_to_content.py data/raw/citeseer-planetoid citeseer out/
"""
import argparse
import os
import pickle
import sys

import numpy as np
import scipy.sparse as sp
import warnings

warnings.filterwarnings("ignore", category=DeprecationWarning)


def load(path):
    with open(path, "rb") as f:
        if sys.version_info > (3, 0):
            return pickle.load(f, encoding="latin1")
        return pickle.load(f)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("src")
    ap.add_argument("name")
    ap.add_argument("out")
    args = ap.parse_args()

    def part(suffix):
        return load(os.path.join(args.src, f"ind.{args.name}.{suffix}"))

    allx, ally, tx, ty, graph = (part(s) for s in ("allx", "ally", "tx", "ty", "graph"))
    with open(os.path.join(args.src, f"ind.{args.name}.test.index")) as f:
        test_index = [int(line) for line in f if line.strip()]
    test_sorted = sorted(test_index)

    lo, hi = test_sorted[0], test_sorted[-1]
    tx_full = sp.lil_matrix((hi - lo + 1, tx.shape[1]))
    ty_full = np.zeros((hi - lo + 1, ty.shape[1]))
    tx_full[np.array(test_sorted) - lo, :] = tx
    ty_full[np.array(test_sorted) - lo, :] = ty

    features = sp.vstack((allx, tx_full)).tolil()
    labels = np.vstack((ally, ty_full))
    features[test_index, :] = features[test_sorted, :]
    labels[test_index, :] = labels[test_sorted, :]
    features = features.tocsr()
    n = features.shape[0]
    classes = labels.argmax(axis=1)

    os.makedirs(args.out, exist_ok=True)
    width = len(str(n - 1))
    with open(os.path.join(args.out, f"{args.name}.content"), "w") as f:
        for i in range(n):
            row = np.asarray(features[i].todense()).ravel()
            vals = " ".join("1" if v != 0 else "0" for v in row)
            f.write(f"n{i:0{width}d} {vals} c{classes[i]}\n")
    # the adjacency lists carry both directions; keep one line per pair
    pairs = set()
    for src, dsts in graph.items():
        for dst in dsts:
            if dst < n:
                pairs.add((min(src, dst), max(src, dst)))
    with open(os.path.join(args.out, f"{args.name}.cites"), "w") as f:
        for a, b in sorted(pairs):
            f.write(f"n{a:0{width}d} n{b:0{width}d}\n")
    lines = len(pairs)
    print(f"nodes={n} features={features.shape[1]} classes={labels.shape[1]} cite_lines={lines}")


if __name__ == "__main__":
    main()
