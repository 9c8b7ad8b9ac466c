"""BK potential, its tropical cone, crystal operators on cone points and the
comparison map to the Langlands dual cone."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from .errors import NotDominant, NotInCone
from .groups import DoubleWord, cluster_minors, factorization_chart, generalized_minor, parse_word
from .rootdata import RootDatum, langlands_dual
from .symbolic import LaurentPoly, TropPoly, positivity_normalize, trop_canonicalize, tropicalize


@dataclass(frozen=True)
class BKPotential:
    word: DoubleWord
    p: tuple          # p_i(z) as LaurentPoly in t-variables, i = 1..r
    q: tuple          # q_i(z)
    h_exponents: tuple  # <alpha_{i*}, b_j> for the cochar basis b_j

    @property
    def datum(self) -> RootDatum:
        return self.word.datum

    @property
    def variables(self) -> tuple:
        r, m = self.word.r, self.word.n
        return tuple(f"h{j}" for j in range(1, r + 1)) + tuple(f"t{k}" for k in range(1, m + 1))

    def terms(self) -> list:
        """[(label, LaurentPoly in (h, t))] for p_i and h^{alpha_{i*}} q_i."""
        vs = self.variables
        out = []
        for i in range(self.word.r):
            out.append((f"p{i + 1}", self.p[i].embed(vs)))
            hmono = LaurentPoly.monomial(vs, tuple(self.h_exponents[i]) + (0,) * self.word.n)
            out.append((f"q{i + 1}", hmono * self.q[i].embed(vs)))
        return out

    def total(self) -> LaurentPoly:
        out = LaurentPoly(self.variables)
        for _, t in self.terms():
            out = out + t
        return out


def bk_potential(datum: RootDatum, word) -> BKPotential:
    if not isinstance(word, DoubleWord):
        word = parse_word(datum, word)
    return _bk_potential(word)


@lru_cache(maxsize=None)
def _bk_potential(word: DoubleWord) -> BKPotential:
    datum = word.datum
    if not word.is_w0_e():
        raise ValueError("the BK potential needs a double reduced word for (w0, e)")
    tvars = tuple(f"t{k}" for k in range(1, word.n + 1))
    z = factorization_chart(word, with_h=False)
    z = type(z)(z.datum, tvars, tuple(_rename_factor(f, tvars) for f in z.factors))
    w0 = datum.longest_word()
    ps, qs, hs = [], [], []
    for i in range(1, datum.rank + 1):
        ps.append(positivity_normalize(generalized_minor(w0, (i,), i, z))[1].numerator)
        qs.append(positivity_normalize(generalized_minor(w0 + (i,), (), i, z))[1].numerator)
        root = datum.simple_root(datum.istar(i))
        hs.append(tuple(int(datum.pair(root, b)) for b in datum.cochar_basis))
    return BKPotential(word, tuple(ps), tuple(qs), tuple(hs))


def _rename_factor(f, tvars):
    # drop the unused h-variables from a chart factor
    def fix(p):
        return LaurentPoly(tvars, {chi[-len(tvars):]: c for chi, c in p.terms.items()})
    if f[0] in ("x", "y", "cor"):
        return f[:2] + (fix(f[2]),)
    return f


# ---------------------------------------------------------------------------
# cones
# ---------------------------------------------------------------------------

def _primitive(v) -> tuple:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g > 1 else tuple(int(x) for x in v)


@dataclass(frozen=True)
class BKCone:
    """{(x, xi) : <a, (x, xi)> >= 0 for every row a}, x in cochar coordinates."""

    datum: RootDatum
    word: DoubleWord
    inequalities: tuple

    @property
    def r(self) -> int:
        return self.datum.rank

    @property
    def m(self) -> int:
        return self.word.n

    @property
    def coords(self) -> tuple:
        return tuple(f"x{j}" for j in range(1, self.r + 1)) + tuple(f"t{k}" for k in range(1, self.m + 1))

    def contains(self, point) -> bool:
        return all(sum(a * Fraction(x) for a, x in zip(row, point)) >= 0 for row in self.inequalities)

    def contains_integral(self, point) -> bool:
        return all(Fraction(x).denominator == 1 for x in point) and self.contains(point)

    def to_json(self) -> dict:
        return {"coords": list(self.coords), "inequalities": [list(r) for r in self.inequalities]}

    def describe(self) -> list:
        """Human readable '<form> >= 0' strings."""
        out = []
        for row in self.inequalities:
            parts = []
            for a, name in zip(row, self.coords):
                if a:
                    parts.append(f"{'+' if a > 0 else '-'} {abs(a) if abs(a) != 1 else ''}{name}")
            s = " ".join(parts).lstrip("+ ")
            out.append(f"{s} >= 0")
        return out

    @cached_property
    def _fm(self) -> list:
        return _fourier_motzkin(self.inequalities, self.r, self.m)

    def fiber_bounds(self, x) -> list:
        """Per-level inequality lists (coefficients on xi_1..xi_j, constant) for fixed x."""
        out = []
        for level in self._fm:
            rows = []
            for row in level:
                const = sum(a * b for a, b in zip(row[:self.r], x))
                rows.append((row[self.r:], const))
            out.append(rows)
        return out


def _fourier_motzkin(ineqs, r, m) -> list:
    """levels[j] = inequalities in (x, xi_1..xi_{j+1}) implied by the cone, j = 0..m-1."""
    levels = [None] * m
    current = sorted({_primitive(row) for row in ineqs})
    for j in range(m - 1, -1, -1):
        var = r + j
        levels[j] = [row[:var + 1] for row in current]
        pos = [row for row in current if row[var] > 0]
        neg = [row for row in current if row[var] < 0]
        nxt = {row[:var] for row in current if row[var] == 0}
        for a in pos:
            for b in neg:
                ca, cb = -b[var], a[var]
                comb = tuple(ca * x + cb * y for x, y in zip(a[:var], b[:var]))
                if any(comb):
                    nxt.add(_primitive(comb))
        current = sorted(nxt)
    return levels


def _canonical_forms(forms: list, arity: int) -> list:
    t = trop_canonicalize(TropPoly.from_forms(arity, [(f, 0) for f in forms]))
    return [chi for chi, _ in t.forms]


def bk_cone(potential: BKPotential) -> BKCone:
    """One inequality per surviving monomial of the tropicalized potential."""
    forms = []
    for _, term in potential.terms():
        forms.extend(term.terms.keys())
    arity = len(potential.variables)
    kept = _canonical_forms(forms, arity)
    rows = sorted({_primitive(f) for f in kept})
    return BKCone(potential.datum, potential.word, tuple(rows))


@lru_cache(maxsize=None)
def cone_for(datum: RootDatum, letters: tuple) -> BKCone:
    return bk_cone(bk_potential(datum, parse_word(datum, letters)))


# ---------------------------------------------------------------------------
# highest weight map and crystal structure
# ---------------------------------------------------------------------------

def _check(cone: BKCone, point) -> tuple:
    point = tuple(int(x) for x in point)
    if len(point) != cone.r + cone.m or not cone.contains(point):
        raise NotInCone(f"{point} is not in the cone")
    return point


def hw_trop(cone: BKCone, point) -> tuple:
    """hw^t in the factorization chart: the H-component, in cochar coordinates."""
    point = _check(cone, point)
    return point[:cone.r]


def hw_omega(cone: BKCone, point) -> tuple:
    return cone.datum.from_cochar_coords(hw_trop(cone, point))


def weight(cone: BKCone, point) -> tuple:
    """wt = hw^t - sum_k xi_k alpha_{i_k}^vee, in omega-vee coordinates."""
    point = tuple(point)
    wt = list(cone.datum.from_cochar_coords(point[:cone.r]))
    for k, xi in enumerate(point[cone.r:]):
        cor = cone.datum.simple_coroot(abs(cone.word.letters[k]))
        for j in range(cone.r):
            wt[j] -= xi * cor[j]
    return tuple(wt)


def _partial_sums(cone: BKCone, point, i: int) -> list:
    a = cone.datum.A
    xs = point[cone.r:]
    # X_l = sum_{k<l} a_{i_k,i} xi_k + xi_l; the diagonal term enters with weight a_ii / 2
    total, out = 0, []
    for l, letter in enumerate(cone.word.letters):
        if abs(letter) == i:
            out.append((l, total + xs[l]))
        total += a[abs(letter) - 1][i - 1] * xs[l]
    return out


def _n_index(cone: BKCone, point, i: int, which: str) -> int:
    sums = _partial_sums(cone, point, i)
    low = min(v for _, v in sums)
    hits = [l for l, v in sums if v == low]
    return hits[0] if which == "f" else hits[-1]


def crystal_apply(cone: BKCone, op: str, i: int, point):
    """f~_i adds v_{n_f}, e~_i subtracts v_{n_e}; None stands for the ghost element."""
    if point is None:
        return None
    point = _check(cone, point)
    n = _n_index(cone, point, i, op)
    out = list(point)
    out[cone.r + n] += 1 if op == "f" else -1
    out = tuple(out)
    return out if cone.contains(out) else None


def crystal_power(cone: BKCone, op: str, i: int, point, k: int):
    for _ in range(k):
        point = crystal_apply(cone, op, i, point)
        if point is None:
            return None
    return point


def _string(cone, op, i, point) -> int:
    n = 0
    while True:
        point = crystal_apply(cone, op, i, point)
        if point is None:
            return n
        n += 1


def crystal_stats(cone: BKCone, point) -> dict:
    point = _check(cone, point)
    eps = tuple(_string(cone, "e", i, point) for i in range(1, cone.r + 1))
    phi = tuple(_string(cone, "f", i, point) for i in range(1, cone.r + 1))
    return {"wt": weight(cone, point), "epsilon": eps, "phi": phi}


def fiber_enumerate(cone: BKCone, lam) -> list:
    """All integral cone points with hw^t = lam (cochar coordinates), in lexicographic order."""
    lam = tuple(int(x) for x in lam)
    if not cone.datum.is_dominant(cone.datum.from_cochar_coords(lam)):
        raise NotDominant(f"{lam} is not dominant")
    levels = cone.fiber_bounds(lam)
    out = []
    _walk(levels, (), out, count_only=False)
    return [lam + p for p in out]


def fiber_count(cone: BKCone, lam) -> int:
    lam = tuple(int(x) for x in lam)
    levels = cone.fiber_bounds(lam)
    return _walk(levels, (), None, count_only=True)


def _range(rows, prefix):
    lo, hi = None, None
    j = len(prefix)
    for coeffs, const in rows:
        a = coeffs[j]
        rest = const + sum(c * v for c, v in zip(coeffs[:j], prefix))
        if a > 0:
            b = -(rest // a)  # ceil(-rest / a)
            lo = b if lo is None else max(lo, b)
        elif a < 0:
            b = rest // (-a)
            hi = b if hi is None else min(hi, b)
        elif rest < 0:
            return 1, 0
    if lo is None or hi is None:
        raise ValueError("fiber is unbounded")
    return lo, hi


def _walk(levels, prefix, out, count_only):
    j = len(prefix)
    lo, hi = _range(levels[j], prefix)
    if j == len(levels) - 1:
        if count_only:
            return max(0, hi - lo + 1)
        out.extend(prefix + (v,) for v in range(lo, hi + 1))
        return 0
    total = 0
    for v in range(lo, hi + 1):
        total += _walk(levels, prefix + (v,), out, count_only)
    return total


# ---------------------------------------------------------------------------
# comparison with the Langlands dual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonMap:
    """psi_i(x; xi) = (psi x; d_{i_1} xi_1, ..., d_{i_m} xi_m)."""

    datum: RootDatum
    word: DoubleWord

    @property
    def matrix(self) -> tuple:
        r, m = self.datum.rank, self.word.n
        rows = []
        for a in range(r):
            rows.append(tuple(self.datum.psi_matrix[a][b] for b in range(r)) + (0,) * m)
        for k in range(m):
            rows.append((0,) * r + tuple(self.word.d_of(k + 1) if j == k else 0 for j in range(m)))
        return tuple(rows)

    def __call__(self, point) -> tuple:
        out = []
        for row in self.matrix:
            v = sum((Fraction(a) * Fraction(x) for a, x in zip(row, point)), Fraction(0))
            out.append(int(v) if v.denominator == 1 else v)
        return tuple(out)


def comparison_map(datum: RootDatum, word) -> ComparisonMap:
    if not isinstance(word, DoubleWord):
        word = parse_word(datum, word)
    return ComparisonMap(datum, word)


def dual_pair(datum: RootDatum, letters) -> tuple:
    """(G cone, G^vee cone, psi) for the same double reduced word."""
    letters = tuple(letters)
    dual = langlands_dual(datum)
    return cone_for(datum, letters), cone_for(dual, letters), comparison_map(datum, letters)


def verify_cone_comparison(cone: BKCone, dual_cone: BKCone, psi: ComparisonMap,
                           samples: int = 2000, box: int = 20, seed: int = 0) -> dict:
    """x in C^G(R) <=> psi(x) in C^{G^vee}(R) on random rational points; integral to integral."""
    rng = random.Random(seed)
    n = cone.r + cone.m
    bad = []
    inside = 0
    for _ in range(samples):
        pt = tuple(Fraction(rng.randint(0, 4 * box), 4) for _ in range(n))
        a, b = cone.contains(pt), dual_cone.contains(psi(pt))
        inside += a
        if a != b:
            bad.append({"point": [str(x) for x in pt], "in_G": a, "in_dual": b})
    # integral points of the G cone inside the box map to integral dual points
    for _ in range(samples):
        pt = tuple(rng.randint(0, box) for _ in range(n))
        if cone.contains(pt):
            img = psi(pt)
            if not dual_cone.contains_integral(img):
                bad.append({"point": list(pt), "integral_image": False})
    return {"check": "cone_comparison", "status": "pass" if not bad else "fail",
            "seed": seed, "samples": samples, "inside": inside, "counterexamples": bad}


def verify_crystal_scaling(cone: BKCone, dual_cone: BKCone, psi: ComparisonMap, lam) -> dict:
    """psi(e~_i x) = e~_i^{d_i} psi(x) and likewise for f~_i over the whole fiber."""
    bad = []
    points = fiber_enumerate(cone, lam)
    d = cone.datum.d
    for x in points:
        px = psi(x)
        for i in range(1, cone.r + 1):
            for op in ("e", "f"):
                lhs = crystal_apply(cone, op, i, x)
                lhs = psi(lhs) if lhs is not None else None
                rhs = crystal_power(dual_cone, op, i, px, d[i - 1])
                if lhs != rhs:
                    bad.append({"point": list(x), "op": f"{op}{i}", "lhs": lhs, "rhs": rhs})
    # psi is injective on integral points but not onto: report how much of the dual fiber it hits
    dual_size = fiber_count(dual_cone, psi(tuple(lam) + (0,) * cone.m)[:cone.r])
    return {"check": "crystal_scaling", "status": "pass" if not bad else "fail",
            "lambda": list(lam), "fiber_size": len(points), "dual_fiber_size": dual_size,
            "counterexamples": bad}


def crystal_axioms(cone: BKCone, lam) -> list:
    """Violations of phi_i - eps_i = <wt, alpha_i> and e~_i f~_i = id on a fiber."""
    bad = []
    for x in fiber_enumerate(cone, lam):
        st = crystal_stats(cone, x)
        for i in range(1, cone.r + 1):
            if st["phi"][i - 1] - st["epsilon"][i - 1] != st["wt"][i - 1]:
                bad.append({"point": list(x), "i": i, "axiom": "phi-eps"})
            y = crystal_apply(cone, "f", i, x)
            if y is not None and crystal_apply(cone, "e", i, y) != x:
                bad.append({"point": list(x), "i": i, "axiom": "ef"})
            y = crystal_apply(cone, "f", i, x)
            if y is not None and weight(cone, y) != tuple(
                    w - c for w, c in zip(st["wt"], cone.datum.simple_coroot(i))):
                bad.append({"point": list(x), "i": i, "axiom": "wt"})
    return bad


def crystal_dot(cone: BKCone, lam) -> str:
    """DOT graph of the fiber with f~_i arrows coloured by i."""
    colors = ["red", "blue", "darkgreen", "orange"]
    pts = fiber_enumerate(cone, lam)
    name = {p: f"n{k}" for k, p in enumerate(pts)}
    lines = ["digraph crystal {"]
    for p in pts:
        lines.append(f'  {name[p]} [label="{",".join(map(str, p[cone.r:]))}"];')
    for p in pts:
        for i in range(1, cone.r + 1):
            q = crystal_apply(cone, "f", i, p)
            if q is not None:
                lines.append(f'  {name[p]} -> {name[q]} [color={colors[(i - 1) % 4]}, label="{i}"];')
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# chart independence of the tropical comparison
# ---------------------------------------------------------------------------

def cluster_trop(word: DoubleWord) -> dict:
    """k -> tropicalized Delta_k(z) as a function of xi."""
    pad = (0,) * word.r  # the minors are taken on z, so the h-variables do not occur

    def wrap(t):
        return lambda xi: t(pad + tuple(xi))
    return {k: wrap(tropicalize(v[1])) for k, v in cluster_minors(word).items()}


def _frozen_weight(word: DoubleWord, k: int, datum: RootDatum) -> tuple:
    u = word.u_word(k)
    return datum.act(u, datum.fundamental_weight(abs(word.letter(k))))


def pt_coordinates(word: DoubleWord, point, trop=None) -> tuple:
    """Tropical Delta_k(h z) = <u_k omega_{i_k}, lambda^vee> + Delta_k(z)^t(xi), k in [-r,-1] u [1,m]."""
    datum = word.datum
    trop = trop or cluster_trop(word)
    r = datum.rank
    lam = datum.from_cochar_coords(point[:r])
    xi = point[r:]
    out = []
    for k in word.all_indices:
        out.append(datum.pair(_frozen_weight(word, k, datum), lam) + trop[k](xi))
    return tuple(out)


def verify_chart_independence(datum: RootDatum, letters, samples: int = 2000,
                              box: int = 20, seed: int = 0) -> dict:
    """psi computed through the factorization chart and through the cluster chart agree."""
    letters = tuple(letters)
    dual = langlands_dual(datum)
    w, wv = parse_word(datum, letters), parse_word(dual, letters)
    psi = comparison_map(datum, w)
    trop, trop_v = cluster_trop(w), cluster_trop(wv)
    dk = [w.d_of(k) for k in w.all_indices]
    rng = random.Random(seed)
    bad = []
    n = datum.rank + w.n
    for _ in range(samples):
        pt = tuple(rng.randint(-box, box) for _ in range(n))
        via_x = pt_coordinates(wv, psi(pt), trop_v)
        via_sigma = tuple(a * b for a, b in zip(dk, pt_coordinates(w, pt, trop)))
        if via_x != via_sigma:
            bad.append({"point": list(pt)})
    return {"check": "chart_independence", "status": "pass" if not bad else "fail",
            "seed": seed, "samples": samples, "counterexamples": bad}
