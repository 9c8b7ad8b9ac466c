"""Builds the fundamental-representation registry shipped in data/reps.json.

Type A and C2 use exterior powers of the defining representation; B2 uses the
5-dimensional vector representation in the antidiagonal realization of SO5 and
the 4-dimensional spin representation.  Run ``python -m artifact.repgen`` to
regenerate the JSON file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from pathlib import Path


def _unit(n, entries):
    return {(r - 1, c - 1): Fraction(v) for r, c, v in entries}


def _defining(type_rank):
    typ, rank = type_rank[0], int(type_rank[1:])
    if typ == "A":
        n = rank + 1
        e = {i: _unit(n, [(i, i + 1, 1)]) for i in range(1, rank + 1)}
        f = {i: _unit(n, [(i + 1, i, 1)]) for i in range(1, rank + 1)}
        return n, e, f
    if type_rank == "C2":
        e = {1: _unit(4, [(1, 2, 1), (3, 4, -1)]), 2: _unit(4, [(2, 3, 1)])}
        f = {1: _unit(4, [(2, 1, 1), (4, 3, -1)]), 2: _unit(4, [(3, 2, 1)])}
        return 4, e, f
    raise KeyError(type_rank)


def _exterior(n, gens, k):
    """Induced action of sparse matrices on the k-th exterior power."""
    basis = list(combinations(range(n), k))
    index = {b: i for i, b in enumerate(basis)}
    out = {}
    for name, m in gens.items():
        act = {}
        for col, b in enumerate(basis):
            for pos, a in enumerate(b):
                for (r, c), v in m.items():
                    if c != a:
                        continue
                    new = list(b)
                    new[pos] = r
                    if len(set(new)) < k:
                        continue
                    # sort with sign
                    sign = 1
                    arr = new[:]
                    for i in range(len(arr)):
                        for j in range(len(arr) - 1 - i):
                            if arr[j] > arr[j + 1]:
                                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                                sign = -sign
                    row = index[tuple(arr)]
                    act[(row, col)] = act.get((row, col), Fraction(0)) + sign * v
        out[name] = {key: v for key, v in act.items() if v != 0}
    return len(basis), out


def _weights(dim, e, f, rank):
    # H_j = [E_j, F_j] is diagonal; its entries are <weight, alpha_j^vee>
    weights = [[0] * rank for _ in range(dim)]
    for j in range(1, rank + 1):
        for a in range(dim):
            val = Fraction(0)
            for (r, c), v in e[j].items():
                if r == a and (c, a) in f[j]:
                    val += v * f[j][(c, a)]
            for (r, c), v in f[j].items():
                if r == a and (c, a) in e[j]:
                    val -= v * e[j][(c, a)]
            weights[a][j - 1] = int(val)
    return weights


def _entry(dim, e, f, rank):
    enc = lambda m: sorted([r + 1, c + 1, str(v)] for (r, c), v in m.items())
    return {"dimension": dim,
            "E": {str(i): enc(e[i]) for i in e},
            "F": {str(i): enc(f[i]) for i in f},
            "weights": _weights(dim, e, f, rank)}


def build_registry() -> dict:
    reg = {}
    for key in ("A1", "A2", "A3", "C2"):
        rank = int(key[1])
        n, e, f = _defining(key)
        reg[key] = {}
        for k in range(1, rank + 1):
            dim, ek = _exterior(n, e, k)
            _, fk = _exterior(n, f, k)
            reg[key][str(k)] = _entry(dim, ek, fk, rank)
    # B2: vector representation of SO5 (antidiagonal form) and the spin representation
    e1 = _unit(5, [(1, 2, 1), (4, 5, -1)])
    f1 = _unit(5, [(2, 1, 1), (5, 4, -1)])
    e2 = _unit(5, [(2, 3, 2), (3, 4, -2)])
    f2 = _unit(5, [(3, 2, 1), (4, 3, -1)])
    se1 = _unit(4, [(2, 3, 1)])
    sf1 = _unit(4, [(3, 2, 1)])
    se2 = _unit(4, [(1, 2, 1), (3, 4, 1)])
    sf2 = _unit(4, [(2, 1, 1), (4, 3, 1)])
    reg["B2"] = {"1": _entry(5, {1: e1, 2: e2}, {1: f1, 2: f2}, 2),
                 "2": _entry(4, {1: se1, 2: se2}, {1: sf1, 2: sf2}, 2)}
    return reg


def main() -> None:
    path = Path(__file__).with_name("data") / "reps.json"
    path.write_text(json.dumps(build_registry(), indent=1, sort_keys=True) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
