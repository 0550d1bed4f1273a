#!/usr/bin/env python3
# Copyright 2026 The qtpq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the periodic kagome and honeycomb cluster files under clusters/.

Clusters are L1 x L2 tori of the primitive cell. Site numbering is
cell-major: site = cell * basis_size + sublattice, cell = x + L1 * y.

  kagome:    sublattices A, B, C; up triangle (A, B, C) in each cell, down
             triangle (B(R), A(R + a1), C(R + a1 - a2)).
  honeycomb: sublattices A, B; z bond A(R)-B(R), x bond A(R)-B(R - a1),
             y bond A(R)-B(R - a2).

Usage: make_clusters.py [output_dir]
"""

import os
import sys


def cell(x, y, l1, l2):
    return (x % l1) + l1 * (y % l2)


def kagome(l1, l2):
    bonds = []
    for y in range(l2):
        for x in range(l1):
            a = 3 * cell(x, y, l1, l2)
            b, c = a + 1, a + 2
            a_right = 3 * cell(x + 1, y, l1, l2)
            c_down = 3 * cell(x + 1, y - 1, l1, l2) + 2
            bonds += [(a, b), (a, c), (b, c), (b, a_right), (b, c_down), (a_right, c_down)]
    return [(min(i, j), max(i, j), "heis") for i, j in bonds]


def honeycomb(l1, l2):
    bonds = []
    for y in range(l2):
        for x in range(l1):
            a = 2 * cell(x, y, l1, l2)
            bonds.append((a, a + 1, "z"))
            bonds.append((a, 2 * cell(x - 1, y, l1, l2) + 1, "x"))
            bonds.append((a, 2 * cell(x, y - 1, l1, l2) + 1, "y"))
    return [(min(i, j), max(i, j), label) for i, j, label in bonds]


def check(kind, n, bonds):
    pairs = {(i, j) for i, j, _ in bonds}
    assert len(pairs) == len(bonds), "duplicate bond"
    degree = [0] * n
    for i, j, _ in bonds:
        assert i != j
        degree[i] += 1
        degree[j] += 1
    assert all(d == (4 if kind == "kagome" else 3) for d in degree), degree


def write(path, kind, l1, l2, bonds):
    n = (3 if kind == "kagome" else 2) * l1 * l2
    check(kind, n, bonds)
    with open(path, "w") as f:
        f.write(f"# {kind} {l1}x{l2} torus, generated by tools/make_clusters.py\n")
        f.write(f"{kind} {n}\n")
        for i, j, label in sorted(bonds):
            f.write(f"{i} {j} {label}\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "clusters")
    os.makedirs(out, exist_ok=True)
    for l1, l2 in [(2, 2), (3, 2)]:
        write(os.path.join(out, f"kagome{3 * l1 * l2}.txt"), "kagome", l1, l2, kagome(l1, l2))
    for l1, l2 in [(2, 2), (3, 2), (3, 3), (4, 3)]:
        write(os.path.join(out, f"honeycomb{2 * l1 * l2}.txt"), "honeycomb", l1, l2, honeycomb(l1, l2))


if __name__ == "__main__":
    main()
