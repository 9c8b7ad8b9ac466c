"""Partial tropicalization PT(K*): constant bracket, leaves, Bohr-Sommerfeld
lattice and the volume comparisons."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, lcm, prod

import sympy

from .errors import (InconclusiveWitness, LatticeError, NotDominant, NotQuantizable,
                     NotRegular, TheoremSymViolation)
from .groups import DoubleWord, cluster_minors, parse_word
from .potential import cone_for, fiber_count, fiber_enumerate
from .rootdata import RootDatum, langlands_dual
from .symbolic import exact_lp_min


# ---------------------------------------------------------------------------
# bracket
# ---------------------------------------------------------------------------

def _u_omega(word: DoubleWord, k: int) -> tuple:
    datum = word.datum
    return datum.act(word.u_word(k), datum.fundamental_weight(abs(word.letter(k))))


def bracket(word: DoubleWord, k: int, p: int) -> Fraction:
    """{lambda_k, phi_p} for k in [-r,-1] u [1,m], p in [1,m]."""
    if k >= p:
        return Fraction(0)
    datum = word.datum
    wk = datum.fundamental_weight(abs(word.letter(k)))
    wp = datum.fundamental_weight(abs(word.letter(p)))
    return datum.form_hstar(wk, wp) - datum.form_hstar(_u_omega(word, k), _u_omega(word, p))


@dataclass(frozen=True)
class PTSkeleton:
    word: DoubleWord
    table: tuple          # rows k in all_indices, columns p = 1..m
    leaf_indices: tuple   # [-r,-1] u e(i), sorted by k+
    B: tuple
    D: tuple              # diagonal entries 1/d_{i_p}
    B_prime: tuple

    @property
    def datum(self) -> RootDatum:
        return self.word.datum

    @property
    def m(self) -> int:
        return self.word.n

    @property
    def casimirs(self) -> tuple:
        """Indices whose bracket row vanishes identically."""
        return tuple(k for k, row in zip(self.word.all_indices, self.table) if not any(row))

    @property
    def det_B(self) -> Fraction:
        return prod(self.D, start=Fraction(1))

    def to_json(self) -> dict:
        enc = lambda x: int(x) if x.denominator == 1 else str(x)
        return {"word": list(self.word.letters), "leaf_indices": list(self.leaf_indices),
                "B": [[enc(x) for x in r] for r in self.B], "D": [enc(x) for x in self.D],
                "B_prime": [[enc(x) for x in r] for r in self.B_prime],
                "casimirs": list(self.casimirs)}


def build_skeleton(datum: RootDatum, word) -> PTSkeleton:
    if not isinstance(word, DoubleWord):
        word = parse_word(datum, word)
    return _build_skeleton(word)


@lru_cache(maxsize=None)
def _build_skeleton(word: DoubleWord) -> PTSkeleton:
    if not word.is_w0_e():
        raise ValueError("PT(K*) charts use double reduced words for (w0, e)")
    m = word.n
    table = tuple(tuple(bracket(word, k, p) for p in range(1, m + 1)) for k in word.all_indices)
    leaf = tuple(sorted(word.index_set, key=word.kplus))
    cols = [word.kplus(k) for k in leaf]
    if cols != list(range(1, m + 1)):
        raise TheoremSymViolation("k -> k+ is not a bijection onto [1, m]")
    B = tuple(tuple(bracket(word, k, p) for p in cols) for k in leaf)
    D = tuple(Fraction(1, word.d_of(p)) for p in cols)
    Bp = tuple(tuple(B[a][b] / D[a] for b in range(m)) for a in range(m))
    for a in range(m):
        for b in range(m):
            x = Bp[a][b]
            ok = x.denominator == 1 and (x == 1 if a == b else (x == 0 if b < a else x >= 0))
            if not ok:
                raise TheoremSymViolation(f"B' entry ({a + 1},{b + 1}) = {x} for word {word.letters}")
    return PTSkeleton(word, table, leaf, B, D, Bp)


# ---------------------------------------------------------------------------
# tropical chart x_i -> sigma(i) on a fixed leaf, and its inverse by chambers
# ---------------------------------------------------------------------------

def _strictly_feasible(rows) -> bool:
    """Is {xi : <row, xi> > 0 for all rows} nonempty?  (homogeneous, so use >= 1)"""
    if not rows:
        return True
    n = len(rows[0])
    a_eq = [list(r) + [-x for x in r] + [-int(i == j) for j in range(len(rows))]
            for i, r in enumerate(rows)]
    cost = [0] * (2 * n + len(rows))
    return exact_lp_min(cost, a_eq, [1] * len(rows)) is not None


@dataclass(frozen=True)
class Chamber:
    forms: tuple      # chosen linear form of each leaf coordinate (rows of L)
    walls: tuple      # rows w with <w, xi> >= 0 on the closed chamber
    inverse: tuple    # L^{-1} as Fractions


class LeafChart:
    """xi -> (Delta_k^t(xi))_{k in leaf indices}, a PL bijection, with its linearity chambers."""

    def __init__(self, skeleton: PTSkeleton):
        self.skeleton = skeleton
        word = skeleton.word
        r = word.r
        minors = cluster_minors(word)
        self.components = []
        for k in skeleton.leaf_indices:
            f = minors[k][1]
            if f.denominator != 1:
                raise ValueError("cluster minors are expected to be Laurent polynomials")
            forms = sorted(tuple(chi[r:]) for chi in f.numerator.terms)
            self.components.append(forms)

    def __call__(self, xi) -> tuple:
        return tuple(min(sum(a * x for a, x in zip(f, xi)) for f in comp) for comp in self.components)

    @cached_property
    def chambers(self) -> list:
        out = []
        m = len(self.components)

        def rec(level, chosen, walls):
            if level == m:
                mat = sympy.Matrix(chosen)
                if mat.det() == 0:
                    return
                inv = mat.inv()
                out.append(Chamber(tuple(chosen), tuple(walls),
                                   tuple(tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                                               for x in inv.row(i)) for i in range(m))))
                return
            comp = self.components[level]
            for f in comp:
                new = [tuple(g[j] - f[j] for j in range(len(f))) for g in comp if g != f]
                if _strictly_feasible(walls + new):
                    rec(level + 1, chosen + [f], walls + new)
        rec(0, [], [])
        return out


def _pt_offset(word: DoubleWord, lam_omega, indices) -> tuple:
    datum = word.datum
    return tuple(datum.pair(_u_omega(word, k), lam_omega) for k in indices)


def _scale_row(coeffs, const) -> tuple:
    den = lcm(*[Fraction(x).denominator for x in list(coeffs) + [const]])
    return (int(const * den),) + tuple(int(Fraction(c) * den) for c in coeffs)


def _tighten(rows):
    """Divide each row (const, a) by gcd(a), rounding the constant down.

    Keeps the integer points and drops rows dominated by a parallel tighter one.
    Returns None when some row has no variables and a negative constant.
    """
    best = {}
    for row in rows:
        c, a = row[0], row[1:]
        g = gcd(*a)
        if g == 0:
            if c < 0:
                return None
            continue
        a = tuple(x // g for x in a)
        c = c // g
        if a not in best or c < best[a]:
            best[a] = c
    return [(c,) + a for a, c in best.items()]


def _fm_levels(rows, m):
    """Greedy Fourier-Motzkin for integer points of {const + <a, n> >= 0}.

    Returns (order, levels): the walk visits n_{order[0]}, n_{order[1]}, ...; levels[j] holds
    rows (const, coefficients on the first j+1 walked variables).  None if infeasible.
    """
    current = _tighten(rows)
    remaining = list(range(m))
    eliminated = []
    raw_levels = []
    while remaining:
        if current is None:
            return None

        def cost(v):
            pos = sum(1 for row in current if row[v + 1] > 0)
            neg = sum(1 for row in current if row[v + 1] < 0)
            return pos * neg - pos - neg
        v = min(remaining, key=cost)
        col = v + 1
        raw_levels.append([row for row in current if any(row[u + 1] for u in remaining)])
        pos = [row for row in current if row[col] > 0]
        neg = [row for row in current if row[col] < 0]
        nxt = [row for row in current if row[col] == 0]
        for x in pos:
            for y in neg:
                ca, cb = -y[col], x[col]
                nxt.append(tuple(ca * p + cb * q for p, q in zip(x, y)))
        current = _tighten(nxt)
        remaining.remove(v)
        eliminated.append(v)
    if current is None:
        return None
    order = eliminated[::-1]
    levels = []
    for j in range(m):
        rows_j = raw_levels[m - 1 - j]
        levels.append([(tuple(row[u + 1] for u in order[:j + 1]), row[0]) for row in rows_j])
    return order, levels


def _enumerate_rows(rows, m, sink):
    """Integer n with const + <a, n> >= 0 for all rows (const first); sink(n) for each."""
    from .potential import _range
    fm = _fm_levels(rows, m)
    if fm is None:
        return
    order, levels = fm
    inverse = [order.index(i) for i in range(m)]

    def walk(prefix):
        j = len(prefix)
        lo, hi = _range(levels[j], prefix)
        if j == m - 1:
            for v in range(lo, hi + 1):
                walked = prefix + (v,)
                sink(tuple(walked[inverse[i]] for i in range(m)))
            return
        for v in range(lo, hi + 1):
            walk(prefix + (v,))
    walk(())


def leaf_lattice(skeleton: PTSkeleton, lam_omega, spacing, origin) -> set:
    """n in Z^m with origin + spacing*n in the sigma-chart fiber over lam (leaf coordinates).

    spacing is a diagonal (tuple); origin is absolute in leaf coordinates.  Returned as a set of
    integer tuples.
    """
    word = skeleton.word
    datum = word.datum
    m = word.n
    r = word.r
    cone = cone_for(datum, word.letters)
    lam_coords = _rational_cochar(datum, lam_omega)
    offset = _pt_offset(word, lam_omega, skeleton.leaf_indices)
    shift = tuple(Fraction(o) - c for o, c in zip(origin, offset))
    chart = leaf_chart(skeleton)
    found = set()
    for ch in chart.chambers:
        # xi = L^{-1} (shift + S n)
        inv = ch.inverse

        def xi_row(coeffs_xi):
            # coefficients of <coeffs_xi, xi> as (const, per-n)
            lin = [sum(coeffs_xi[a] * inv[a][b] for a in range(m)) for b in range(m)]
            const = sum(lin[b] * shift[b] for b in range(m))
            return const, tuple(lin[b] * spacing[b] for b in range(m))
        rows = []
        for w in ch.walls:
            c, a = xi_row(w)
            rows.append(_scale_row(a, c))
        for row in cone.inequalities:
            c, a = xi_row(row[r:])
            c += sum(x * y for x, y in zip(row[:r], lam_coords))
            rows.append(_scale_row(a, c))
        _enumerate_rows(rows, m, found.add)
    return found


@lru_cache(maxsize=None)
def _leaf_chart(word: DoubleWord) -> LeafChart:
    return LeafChart(_build_skeleton(word))


def leaf_chart(skeleton: PTSkeleton) -> LeafChart:
    return _leaf_chart(skeleton.word)


def _rational_cochar(datum: RootDatum, lam_omega) -> tuple:
    m = sympy.Matrix(datum.cochar_basis).T
    v = sympy.Matrix([sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in lam_omega])
    sol = m.inv() * v
    return tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol)


# ---------------------------------------------------------------------------
# leaves and Bohr-Sommerfeld lattice
# ---------------------------------------------------------------------------

def leaves(skeleton: PTSkeleton, lam_vee) -> dict:
    """Casimir values and free coordinates of the leaf hw_R^{-t}(lam_vee) x (S^1)^m.

    lam_vee is given in omega-vee coordinates.
    """
    datum = skeleton.datum
    lam = tuple(Fraction(x) for x in lam_vee)
    if not datum.is_dominant(lam):
        raise NotDominant(f"{lam_vee} is not dominant")
    word = skeleton.word
    cas = {k: datum.pair(_u_omega(word, k), lam) for k in skeleton.casimirs}
    w0 = {i: datum.pair(datum.w0(datum.fundamental_weight(i)), lam) for i in range(1, datum.rank + 1)}
    regular = all(x > 0 for x in lam)
    dim = _fiber_dimension(skeleton, lam)
    return {"lambda_vee": [str(x) for x in lam], "casimirs": {str(k): str(v) for k, v in cas.items()},
            "w0_pairings": {str(i): str(v) for i, v in w0.items()},
            "leaf_coordinates": list(skeleton.leaf_indices), "regular": regular,
            "fiber_dimension": dim, "leaf_dimension": 2 * dim}


def _fiber_dimension(skeleton: PTSkeleton, lam) -> int:
    """Affine dimension of the real x-chart fiber: m minus the rank of its implicit equalities."""
    datum = skeleton.datum
    cone = cone_for(datum, skeleton.word.letters)
    r, m = datum.rank, skeleton.m
    x = _rational_cochar(datum, lam)
    rows = [(tuple(row[r:]), sum(a * b for a, b in zip(row[:r], x))) for row in cone.inequalities]
    implicit = []
    for a, c in rows:
        # max <a, xi> + c over the fiber == 0 iff the inequality is tight everywhere
        if _max_over(rows, a) + c == 0:
            implicit.append(a)
    rank = sympy.Matrix(implicit).rank() if implicit else 0
    return m - rank


def _max_over(rows, obj) -> Fraction:
    # max <obj, xi> s.t. <a, xi> + c >= 0; xi = p - q, slack s: <a,p-q> - s = -c
    m = len(obj)
    k = len(rows)
    a_eq = [list(a) + [-x for x in a] + [-int(i == j) for j in range(k)] for i, (a, _) in enumerate(rows)]
    b_eq = [-c for _, c in rows]
    cost = [-x for x in obj] + list(obj) + [0] * k
    best = exact_lp_min(cost, a_eq, b_eq)
    if best is None:
        raise NotDominant("empty fiber")
    return -best


@dataclass(frozen=True)
class BSLattice:
    lam_vee: tuple            # omega-vee coordinates (may be rational)
    base_point: tuple         # xi_lambda in leaf coordinates
    generators: tuple         # columns of B
    spacing: tuple            # diagonal of D
    steps: frozenset          # integer n with base + D n in the fiber

    def points(self) -> list:
        return sorted(tuple(b + s * x for b, s, x in zip(self.base_point, self.spacing, n))
                      for n in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def x_chart_points(self, skeleton: "PTSkeleton") -> list:
        """Preimages (x, xi) in the factorization chart, x = lam_vee in cocharacter coordinates."""
        chart = leaf_chart(skeleton)
        x = _rational_cochar(skeleton.datum, self.lam_vee)
        out = []
        for p in self.points():
            target = tuple(a - b for a, b in zip(p, self.base_point))
            for ch in chart.chambers:
                xi = tuple(sum(r[j] * target[j] for j in range(len(target))) for r in ch.inverse)
                if chart(xi) == target:
                    out.append(x + xi)
                    break
        return sorted(out)


def lambda_vee_of(datum: RootDatum, lam) -> tuple:
    """psi^{-1}(lam) for lam in X*_+ (omega coordinates); NotQuantizable otherwise."""
    lam = tuple(Fraction(x) for x in lam)
    try:
        datum.char_coords(lam)
    except LatticeError:
        raise NotQuantizable(f"{lam} is not in X*(H)") from None
    if not datum.is_dominant(lam):
        raise NotQuantizable(f"{lam} is not dominant")
    inv = sympy.Matrix(datum.psi_omega).inv()
    v = inv * sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in lam])
    return tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in v)


def bs_lattice(skeleton: PTSkeleton, lam_vee, box=None) -> BSLattice:
    """(xi_lambda + B Z^m) cap C(R) on the leaf over lam_vee (omega-vee coordinates).

    B = D B' with B' unimodular, so B Z^m = D Z^m.
    """
    datum = skeleton.datum
    lam = tuple(Fraction(x) for x in lam_vee)
    if not datum.is_dominant(lam):
        raise NotDominant(f"{lam_vee} is not dominant")
    base = _pt_offset(skeleton.word, lam, skeleton.leaf_indices)
    steps = leaf_lattice(skeleton, lam, skeleton.D, base)
    if box is not None:
        steps = {n for n in steps
                 if all(abs(b + s * x) <= box for b, s, x in zip(base, skeleton.D, n))}
    gens = tuple(tuple(skeleton.B[a][b] for a in range(skeleton.m)) for b in range(skeleton.m))
    return BSLattice(lam, base, gens, skeleton.D, frozenset(steps))


def bs_lattice_count(skeleton: PTSkeleton, lam_vee) -> int:
    return len(bs_lattice(skeleton, lam_vee).steps)


def dual_fiber_leaf_points(datum: RootDatum, letters, lam) -> set:
    """Integral points of the dual cone fiber over lam, in the dual sigma-chart leaf coordinates."""
    from .potential import cluster_trop
    dual = langlands_dual(datum)
    word_v = parse_word(dual, letters)
    skel_v = build_skeleton(dual, word_v)
    cone_v = cone_for(dual, tuple(letters))
    lam_c = dual.cochar_coords(lam)
    trop = cluster_trop(word_v)
    base = _pt_offset(word_v, lam, skel_v.leaf_indices)
    out = set()
    for pt in fiber_enumerate(cone_v, lam_c):
        xi = pt[dual.rank:]
        out.add(tuple(b + trop[k](xi) for b, k in zip(base, skel_v.leaf_indices)))
    return out


def verify_bs_duality(datum: RootDatum, letters, lam, box: int = 12) -> dict:
    """psi_sigma(Lambda~) equals the integral dual fiber over lam, as sets inside the box."""
    letters = tuple(letters)
    skel = build_skeleton(datum, letters)
    lam_vee = lambda_vee_of(datum, lam)
    bs = bs_lattice(skel, lam_vee, box)
    scale = [skel.word.d_of(k) for k in skel.leaf_indices]
    image = {tuple(d * y for d, y in zip(scale, p)) for p in bs.points()}
    dual_pts = {p for p in dual_fiber_leaf_points(datum, letters, tuple(lam))
                if all(abs(y) <= box * d for y, d in zip(p, scale))}
    missing = sorted(dual_pts - image)
    extra = sorted(image - dual_pts)
    enc = lambda p: [str(x) for x in p]
    return {"check": "bs_duality", "status": "pass" if not missing and not extra else "fail",
            "lambda": [str(x) for x in lam], "size": len(image),
            "counterexamples": [{"missing": enc(p)} for p in missing] + [{"extra": enc(p)} for p in extra]}


# ---------------------------------------------------------------------------
# volumes
# ---------------------------------------------------------------------------

def weyl_product(datum: RootDatum, lam) -> Fraction:
    """prod_{alpha>0} (lam, alpha) / (rho, alpha)."""
    num = prod((datum.form_hstar(lam, a) for a, _ in datum.positive_roots()), start=Fraction(1))
    den = prod((datum.form_hstar(datum.rho, a) for a, _ in datum.positive_roots()), start=Fraction(1))
    return num / den


def volume(skeleton: PTSkeleton, lam_vee, n_values) -> list:
    """Rows (N, lattice count over N lam_vee, N^m * Weyl product of psi(lam_vee), ratio)."""
    datum = skeleton.datum
    lam = tuple(Fraction(x) for x in lam_vee)
    if not all(x > 0 for x in lam):
        raise NotRegular(f"{lam_vee} is not regular dominant")
    wp = weyl_product(datum, datum.psi(lam))
    rows = []
    for n in n_values:
        count = bs_lattice_count(skeleton, tuple(n * x for x in lam))
        target = Fraction(n) ** skeleton.m * wp
        rows.append({"N": n, "count": count, "weyl_product": target, "ratio": Fraction(count) / target})
    return rows


def corollary_vol_check(datum: RootDatum, lam_vees) -> dict:
    """dim V_{lam - rho} = (prod d_alpha) dim V^vee_{lam_vee - rho_vee}, lam = psi(lam_vee)."""
    dual = langlands_dual(datum)
    factor = datum.d_product()
    rows, bad = [], []
    for lv in lam_vees:
        lv = tuple(Fraction(x) for x in lv)
        lam = datum.psi(lv)
        left = datum.weyl_dim(tuple(x - 1 for x in lam))
        right = dual.weyl_dim(tuple(x - 1 for x in lv))
        rows.append({"lambda_vee": [str(x) for x in lv], "dim": left, "dual_dim": right, "factor": factor})
        if left != factor * right:
            bad.append(rows[-1])
    return {"check": "corollary_volume", "status": "pass" if not bad else "fail",
            "rows": rows, "counterexamples": bad}


# ---------------------------------------------------------------------------
# quantizability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TropPoissonVariety:
    """Constant bivector B on the leaves with a way to list integral points of a fiber."""

    bivector: tuple
    integral_fiber: object   # callable lam -> iterable of integral leaf points
    rank: int

    def in_lattice(self, x, y) -> bool:
        """y - x in B Z^m."""
        b = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, row)]
                          for row in self.bivector])
        diff = sympy.Matrix([sympy.Rational(Fraction(p - q).numerator, Fraction(p - q).denominator)
                             for p, q in zip(y, x)])
        sol = b.LUsolve(diff)
        return all(v.is_integer for v in sol)


def pt_variety(datum: RootDatum, letters) -> TropPoissonVariety:
    skel = build_skeleton(datum, letters)
    m = skel.m

    def fiber(lam):
        lam_vee = lambda_vee_of(datum, lam)
        steps = leaf_lattice(skel, lam_vee, (1,) * m, (0,) * m)
        return sorted(steps)
    return TropPoissonVariety(skel.B, fiber, datum.rank)


def synthetic_counterexample() -> TropPoissonVariety:
    """Rank-2 skeleton with brackets 1/2 on the diagonal and 1/3 off it on a d = 2 system."""
    b = ((Fraction(1, 2), Fraction(1, 3)), (Fraction(0), Fraction(1, 2)))

    def fiber(lam):
        n = int(sum(lam))
        return [(a, c) for a in range(n + 1) for c in range(n + 1)]
    return TropPoissonVariety(b, fiber, 2)


def quantizability_check(variety: TropPoissonVariety, witness, bound: int = 2) -> bool:
    """X^t cap C_lambda inside Lambda_x on the witness fiber."""
    if any(Fraction(c) < bound for c in witness):
        raise InconclusiveWitness(f"witness {tuple(witness)} is closer than {bound} to a wall")
    pts = list(variety.integral_fiber(tuple(witness)))
    if not pts:
        raise InconclusiveWitness("witness fiber has no integral points")
    x = pts[0]
    return all(variety.in_lattice(x, y) for y in pts[1:])
