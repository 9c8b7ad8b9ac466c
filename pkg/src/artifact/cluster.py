"""Seeds, mutation of matrices and charts, dual seeds and the comparison tori maps."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .errors import NotExchangeable, NotFound, VariableContextError
from .symbolic import LaurentPoly, PosRational, tropicalize_map


def mutate_matrix(m, k: int) -> tuple:
    """Matrix mutation at the k-th position (0-based)."""
    n = len(m)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-m[i][j])
            else:
                row.append(m[i][j] + (abs(m[i][k]) * m[k][j] + m[i][k] * abs(m[k][j])) // 2)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class Seed:
    index_set: tuple
    exchangeable: tuple
    matrix: tuple
    skew_symmetrizer: tuple
    d: int
    labels: tuple = ()

    def __post_init__(self):
        n = len(self.index_set)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise VariableContextError("seed matrix must be square over the index set")
        if not set(self.exchangeable) <= set(self.index_set):
            raise ValueError("exchangeable set must lie in the index set")
        dd = self.skew_symmetrizer
        for a in range(n):
            if self.d % dd[a]:
                raise ValueError("d must be a common multiple of the skew-symmetrizer")
            for b in range(n):
                if self.matrix[a][b] * dd[b] != -self.matrix[b][a] * dd[a]:
                    raise ValueError(f"skew-symmetrizer fails at {self.index_set[a], self.index_set[b]}")
        if self.labels and len(self.labels) != n:
            raise ValueError("one label per index")

    @property
    def variables(self) -> tuple:
        return self.labels or tuple(f"a{k}" if k >= 0 else f"a_{-k}" for k in self.index_set)

    def pos(self, k) -> int:
        return self.index_set.index(k)

    def entry(self, i, j) -> int:
        return self.matrix[self.pos(i)][self.pos(j)]

    def principal_part(self) -> tuple:
        p = [self.pos(k) for k in self.exchangeable]
        return tuple(tuple(self.matrix[a][b] for b in p) for a in p)

    def mutate(self, k) -> "Seed":
        if k not in self.exchangeable:
            raise NotExchangeable(f"{k} is not exchangeable")
        return Seed(self.index_set, self.exchangeable, mutate_matrix(self.matrix, self.pos(k)),
                    self.skew_symmetrizer, self.d, self.labels)

    def to_json(self) -> dict:
        return {"index_set": list(self.index_set), "exchangeable": list(self.exchangeable),
                "matrix": [list(r) for r in self.matrix],
                "skew_symmetrizer": list(self.skew_symmetrizer), "d": self.d}

    @classmethod
    def from_json(cls, data) -> "Seed":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["index_set"]), tuple(data["exchangeable"]),
                   tuple(tuple(r) for r in data["matrix"]), tuple(data["skew_symmetrizer"]), data["d"])


@dataclass(frozen=True)
class MutationPath:
    start: Seed
    directions: tuple

    def __post_init__(self):
        for k in self.directions:
            if k not in self.start.exchangeable:
                raise NotExchangeable(f"{k} is not exchangeable")

    def end(self) -> Seed:
        s = self.start
        for k in self.directions:
            s = s.mutate(k)
        return s


def mutate_chart(seed: Seed, k) -> tuple:
    """mu_k^* of the coordinates of the mutated torus, in the coordinates of seed."""
    if k not in seed.exchangeable:
        raise NotExchangeable(f"{k} is not exchangeable")
    vs = seed.variables
    col = seed.pos(k)
    n = len(vs)
    plus, minus = [0] * n, [0] * n
    for j in range(n):
        m = seed.matrix[j][col]
        if m > 0:
            plus[j] = m
        elif m < 0:
            minus[j] = -m
    num = LaurentPoly.monomial(vs, plus) + LaurentPoly.monomial(vs, minus)
    out = [PosRational.var(vs, v) for v in vs]
    out[col] = PosRational(num) / out[col]
    return tuple(out)


def path_chart(seed: Seed, directions) -> tuple:
    """Coordinates of mu_path(seed) as PosRational functions on the torus of seed."""
    vs = seed.variables
    current = tuple(PosRational.var(vs, v) for v in vs)
    s = seed
    for k in directions:
        step = mutate_chart(s, k)
        current = tuple(f.substitute(current).simplify() for f in step)
        s = s.mutate(k)
    return current


def dual_seed(seed: Seed) -> Seed:
    n = len(seed.index_set)
    mt = tuple(tuple(-seed.matrix[j][i] for j in range(n)) for i in range(n))
    return Seed(seed.index_set, seed.exchangeable, mt,
                tuple(seed.d // x for x in seed.skew_symmetrizer), seed.d, seed.labels)


def comparison_on_seed(seed: Seed) -> tuple:
    """Psi_sigma^*: a_i^vee -> a_i^{d_i}."""
    vs = seed.variables
    return tuple(PosRational.var(vs, v) ** e for v, e in zip(vs, seed.skew_symmetrizer))


def tropical_mutation(seed: Seed, directions):
    return tropicalize_map(path_chart(seed, directions))


def verify_commuting_square(seed: Seed, directions, samples) -> bool:
    """(mu^vee)^t o psi_sigma == psi_{mu(sigma)} o mu^t on every sample point."""
    directions = tuple(directions)
    MutationPath(seed, directions)
    if not directions:
        return True
    mu = tropical_mutation(seed, directions)
    mu_dual = tropical_mutation(dual_seed(seed), directions)
    dd = seed.skew_symmetrizer
    for pt in samples:
        left = mu_dual(tuple(a * x for a, x in zip(dd, pt)))
        right = tuple(a * x for a, x in zip(dd, mu(pt)))
        if left != right:
            return False
    return True


def find_mutation_path(source: Seed, target: Seed, max_depth: int = 6) -> tuple:
    """Breadth-first search for directions with mu_path(source).matrix == target.matrix."""
    if tuple(source.index_set) != tuple(target.index_set) or \
            set(source.exchangeable) != set(target.exchangeable):
        raise NotFound("seeds do not share index sets")
    seen = {source.matrix: ()}
    queue = deque([(source, ())])
    while queue:
        s, path = queue.popleft()
        if s.matrix == target.matrix:
            return path
        if len(path) >= max_depth:
            continue
        for k in source.exchangeable:
            if path and path[-1] == k:
                continue
            t = s.mutate(k)
            if t.matrix not in seen:
                seen[t.matrix] = path + (k,)
                queue.append((t, path + (k,)))
    raise NotFound(f"no mutation path of length <= {max_depth}")


def stasheff_seed() -> Seed:
    """Top seed of the Stasheff pentagon for the Grassmannian of planes in 5-space."""
    m11 = ((0, -1), (1, 0))
    m12 = ((1, -1, 1, 0, 0), (0, 0, -1, 1, -1))
    rows = [m11[a] + m12[a] for a in range(2)]
    # skew-symmetry forces the lower-left block to be -M12^T
    for j in range(5):
        rows.append((-m12[0][j], -m12[1][j]) + (0,) * 5)
    labels = ("b13", "b14", "b12", "b23", "b34", "b45", "b15")
    return Seed(tuple(range(1, 8)), (1, 2), tuple(rows), (1,) * 7, 1, labels)


@dataclass(frozen=True)
class DecoratedSeed:
    """Seed extended by a torus H of rank r carrying the monomial map Psi^H."""

    torus_rank: int
    seed: Seed
    psi_h: tuple

    def extended(self) -> Seed:
        n, r = len(self.seed.index_set), self.torus_rank
        rows = [tuple(row) + (0,) * r for row in self.seed.matrix]
        rows += [(0,) * (n + r) for _ in range(r)]
        idx = tuple(self.seed.index_set) + tuple(f"H{j}" for j in range(1, r + 1))
        labels = self.seed.variables + tuple(f"h{j}" for j in range(1, r + 1))
        return Seed(idx, self.seed.exchangeable, tuple(rows),
                    tuple(self.seed.skew_symmetrizer) + (self.seed.d,) * r, self.seed.d, labels)

    def comparison(self):
        """Tropical Psi: (lambda^vee coords, xi) -> (psi lambda^vee coords, d_k xi_k)."""
        r = self.torus_rank
        dd = self.seed.skew_symmetrizer

        def apply(point):
            h, xi = point[:r], point[r:]
            ph = tuple(sum(self.psi_h[a][b] * h[b] for b in range(r)) for a in range(r))
            return ph + tuple(a * x for a, x in zip(dd, xi))
        return apply
