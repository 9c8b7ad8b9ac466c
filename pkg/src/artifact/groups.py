"""Matrix models of the registered groups in their fundamental representations.

Generalized minors are matrix coefficients between extreme weight vectors,
with extreme vectors obtained by applying the lifts s_i-bar to the highest
weight vector.  Group elements are kept as factor lists so that the
anti-automorphisms T and iota can be applied at the generator level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import factorial

import sympy

from .errors import LatticeError, NotDecomposable, NotReduced, UnsupportedWeight
from .rootdata import RootDatum
from .symbolic import LaurentPoly, PosRational, matmul, positivity_normalize


# ---------------------------------------------------------------------------
# representation registry
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _registry() -> dict:
    return json.loads(resources.files("artifact").joinpath("data/reps.json").read_text())


def _dense(dim, entries):
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for r, c, v in entries:
        m[r - 1][c - 1] = Fraction(v)
    return m


def _mm(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k) if a[i][t] and b[t][j]), Fraction(0))
             for j in range(m)] for i in range(n)]


def _ident(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _exp_nilpotent(m, scale=Fraction(1)):
    n = len(m)
    out, power, k = _ident(n), _ident(n), 0
    while True:
        k += 1
        power = _mm(power, m)
        if all(x == 0 for row in power for x in row):
            return out
        c = scale ** k / factorial(k)
        out = [[out[i][j] + c * power[i][j] for j in range(n)] for i in range(n)]


@dataclass(frozen=True, eq=False)
class RepData:
    type_name: str
    index: int
    dimension: int
    E: dict
    F: dict
    weights: tuple

    @property
    def rank(self) -> int:
        return len(self.weights[0])

    @cached_property
    def highest(self) -> int:
        target = tuple(int(j == self.index - 1) for j in range(self.rank))
        hits = [a for a, w in enumerate(self.weights) if tuple(w) == target]
        if len(hits) != 1:
            raise UnsupportedWeight("highest weight space is not one dimensional")
        return hits[0]

    def e(self, i):
        return _dense(self.dimension, self.E[i])

    def f(self, i):
        return _dense(self.dimension, self.F[i])

    @lru_cache(maxsize=None)
    def sbar(self, i: int):
        # phi_i([[0,-1],[1,0]]) = x_i(-1) y_i(1) x_i(-1)
        xe = _exp_nilpotent(self.e(i), Fraction(-1))
        return _mm(_mm(xe, _exp_nilpotent(self.f(i))), xe)

    @lru_cache(maxsize=None)
    def sbar_inv(self, i: int):
        xe = _exp_nilpotent(self.e(i))
        return _mm(_mm(xe, _exp_nilpotent(self.f(i), Fraction(-1))), xe)

    @lru_cache(maxsize=None)
    def extreme_vector(self, word: tuple) -> tuple:
        """w-bar v_{omega_i} for w = s_{w1}...s_{wk} (rightmost letter acts first)."""
        v = [Fraction(int(a == self.highest)) for a in range(self.dimension)]
        for i in reversed(word):
            s = self.sbar(i)
            v = [sum((s[a][b] * v[b] for b in range(self.dimension) if v[b]), Fraction(0))
                 for a in range(self.dimension)]
        return tuple(v)

    @lru_cache(maxsize=None)
    def extreme_covector(self, word: tuple) -> tuple:
        """v_{omega_i}^* w-bar^{-1}, the functional picking the w omega_i coefficient."""
        r = [Fraction(int(a == self.highest)) for a in range(self.dimension)]
        for i in reversed(word):
            s = self.sbar_inv(i)
            r = [sum((r[b] * s[b][a] for b in range(self.dimension) if r[b]), Fraction(0))
                 for a in range(self.dimension)]
        return tuple(r)


@lru_cache(maxsize=None)
def rep_data(type_name: str, i: int) -> RepData:
    reg = _registry()
    try:
        raw = reg[type_name][str(i)]
    except KeyError:
        raise UnsupportedWeight(f"no representation registered for {type_name}, omega_{i}") from None
    return RepData(type_name, i, raw["dimension"],
                   {int(k): tuple(tuple(x) for x in v) for k, v in raw["E"].items()},
                   {int(k): tuple(tuple(x) for x in v) for k, v in raw["F"].items()},
                   tuple(tuple(w) for w in raw["weights"]))


def reps_for(datum: RootDatum) -> list:
    return [rep_data(datum.name, i) for i in range(1, datum.rank + 1)]


# ---------------------------------------------------------------------------
# Weyl group elements as canonical reduced words
# ---------------------------------------------------------------------------

def canonical_word(datum: RootDatum, word) -> tuple:
    """Lexicographically greedy reduced word of the Weyl element spelled by word."""
    mu = datum.act(tuple(abs(i) for i in word), datum.rho)
    out = []
    while any(x < 0 for x in mu):
        i = next(j for j in range(1, datum.rank + 1) if mu[j - 1] < 0)
        out.append(i)
        mu = datum.reflect(i, mu)
    return tuple(out)


# ---------------------------------------------------------------------------
# double reduced words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoubleWord:
    datum: RootDatum
    letters: tuple

    def __post_init__(self):
        r = self.datum.rank
        if any(i == 0 or abs(i) > r for i in self.letters):
            raise NotReduced(f"letters must lie in [-{r},-1] or [1,{r}]")
        neg = tuple(-i for i in self.letters if i < 0)
        pos = tuple(i for i in self.letters if i > 0)
        if not self.datum.is_reduced(neg) or not self.datum.is_reduced(pos):
            raise NotReduced(f"{self.letters} is not a double reduced word")

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def r(self) -> int:
        return self.datum.rank

    @property
    def u(self) -> tuple:
        return tuple(-i for i in self.letters if i < 0)

    @property
    def v(self) -> tuple:
        return tuple(i for i in self.letters if i > 0)

    def is_w0_e(self) -> bool:
        return not self.v and len(self.u) == self.datum.num_positive_roots

    def letter(self, k: int) -> int:
        """i_k, with the convention i_k = k for the frozen indices k in [-r,-1]."""
        return k if k < 0 else self.letters[k - 1]

    def kplus(self, k: int) -> int:
        start = 1 if k < 0 else k + 1
        a = abs(self.letter(k))
        for j in range(start, self.n + 1):
            if abs(self.letters[j - 1]) == a:
                return j
        return self.n + 1

    @cached_property
    def exchangeable(self) -> tuple:
        return tuple(k for k in range(1, self.n + 1) if self.kplus(k) <= self.n)

    @property
    def index_set(self) -> tuple:
        return tuple(range(-self.r, 0)) + self.exchangeable

    @property
    def all_indices(self) -> tuple:
        return tuple(range(-self.r, 0)) + tuple(range(1, self.n + 1))

    def d_of(self, k: int) -> int:
        return self.datum.d[abs(self.letter(k)) - 1]

    @property
    def word_symmetrizer(self) -> tuple:
        return tuple(self.d_of(k) for k in range(1, self.n + 1))

    def seed_matrix(self, indices=None) -> tuple:
        idx = tuple(indices) if indices is not None else self.index_set
        sgn = lambda x: (x > 0) - (x < 0)
        a = self.datum.A
        out = []
        for k in idx:
            row = []
            for l in idx:
                p, q = max(k, l), min(self.kplus(k), self.kplus(l))
                ip = self.letter(p)
                if p == q:
                    val = -sgn(k - l) * sgn(ip)
                elif p < q and q <= self.n and \
                        sgn(ip) * sgn(self.letter(q)) * (k - l) * (self.kplus(k) - self.kplus(l)) > 0:
                    val = -sgn(k - l) * sgn(ip) * a[abs(self.letter(k)) - 1][abs(self.letter(l)) - 1]
                else:
                    val = 0
                row.append(val)
            out.append(tuple(row))
        return tuple(out)

    def u_word(self, k: int) -> tuple:
        if k < 0:
            return ()
        return tuple(-i for i in self.letters[:k] if i < 0)

    def v_inv_word(self, k: int) -> tuple:
        """v_{>k}^{-1} = s_{i_{k+1}} ... s_{i_n} over the positive letters."""
        start = 0 if k < 0 else k
        return tuple(i for i in self.letters[start:] if i > 0)

    def minor_data(self, k: int) -> tuple:
        """(u word, v word, fundamental index) of the cluster minor Delta_k."""
        i = abs(self.letter(k))
        return self.u_word(k), self.v_inv_word(k), i


def word_seed(word: DoubleWord):
    from .cluster import Seed
    idx = word.index_set
    return Seed(idx, word.exchangeable, word.seed_matrix(idx),
                tuple(word.d_of(k) for k in idx), word.datum.lcm_d)


def parse_word(datum: RootDatum, text) -> DoubleWord:
    letters = tuple(int(x) for x in text.split(",")) if isinstance(text, str) else tuple(text)
    return DoubleWord(datum, letters)


# ---------------------------------------------------------------------------
# symbolic group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolicGroupElement:
    """Ordered product of generator factors.

    factors: ('x', i, p) = exp(p E_i), ('y', i, p) = exp(p F_i),
    ('cor', i, m) = alpha_i^vee(m) for a monomial m, ('h', exps) = prod_j b_j(m_j)
    over the basis b_j of X_*(H) with monomials m_j.
    """

    datum: RootDatum
    variables: tuple
    factors: tuple = ()

    def __mul__(self, other: "SymbolicGroupElement") -> "SymbolicGroupElement":
        if self.variables != other.variables:
            raise ValueError("variable context mismatch")
        return SymbolicGroupElement(self.datum, self.variables, self.factors + other.factors)

    def _factor_matrix(self, rep: RepData, factor):
        kind = factor[0]
        n = rep.dimension
        one = LaurentPoly.const(self.variables, 1)
        if kind in ("x", "y"):
            _, i, p = factor
            gen = rep.e(i) if kind == "x" else rep.f(i)
            out = [[one * int(a == b) for b in range(n)] for a in range(n)]
            power = _ident(n)
            term = one
            k = 0
            while True:
                k += 1
                power = _mm(power, gen)
                if all(x == 0 for row in power for x in row):
                    return out
                term = term * p
                c = Fraction(1, factorial(k))
                for a in range(n):
                    for b in range(n):
                        if power[a][b]:
                            out[a][b] = out[a][b] + term * (c * power[a][b])
        if kind == "cor":
            _, i, m = factor
            return [[(m ** rep.weights[a][i - 1]) if a == b else one * 0 for b in range(n)]
                    for a in range(n)]
        if kind == "h":
            _, monos = factor
            diag = []
            for a in range(n):
                val = one
                for j, m in enumerate(monos):
                    e = self.datum.pair(rep.weights[a], self.datum.cochar_basis[j])
                    if e.denominator != 1:
                        raise LatticeError(
                            f"weight {rep.weights[a]} does not pair integrally with X_*(H); "
                            "this representation does not descend to the chosen isogeny")
                    val = val * (m ** int(e))
                diag.append(val)
            return [[diag[a] if a == b else one * 0 for b in range(n)] for a in range(n)]
        raise ValueError(kind)

    def matrix(self, rep: RepData):
        return _cached_matrix(self, rep)

    def transpose(self) -> "SymbolicGroupElement":
        swap = {"x": "y", "y": "x", "cor": "cor", "h": "h"}
        out = tuple((swap[f[0]],) + f[1:] for f in reversed(self.factors))
        return SymbolicGroupElement(self.datum, self.variables, out)

    def iota(self) -> "SymbolicGroupElement":
        out = []
        for f in reversed(self.factors):
            if f[0] == "cor":
                out.append(("cor", f[1], f[2].monomial_inverse()))
            elif f[0] == "h":
                out.append(("h", tuple(m.monomial_inverse() for m in f[1])))
            else:
                out.append(f)
        return SymbolicGroupElement(self.datum, self.variables, tuple(out))


@lru_cache(maxsize=4096)
def _cached_matrix(g: SymbolicGroupElement, rep: RepData):
    n = rep.dimension
    one = LaurentPoly.const(g.variables, 1)
    out = [[one * int(a == b) for b in range(n)] for a in range(n)]
    for f in g.factors:
        out = matmul(out, g._factor_matrix(rep, f))
    return tuple(tuple(x if isinstance(x, LaurentPoly) else one * x for x in row) for row in out)


def identity_element(datum: RootDatum, variables=("t",)) -> SymbolicGroupElement:
    return SymbolicGroupElement(datum, tuple(variables))


def elementary(datum: RootDatum, i: int, var: str, variables=None) -> SymbolicGroupElement:
    """x_i(t) for i > 0, x_{-i}(t) = phi_i([[t^-1,0],[1,t]]) for i < 0."""
    variables = tuple(variables) if variables is not None else (var,)
    t = LaurentPoly.var(variables, var)
    if i > 0:
        factors = (("x", i, t),)
    else:
        factors = (("y", -i, t), ("cor", -i, t.monomial_inverse()))
    return SymbolicGroupElement(datum, variables, factors)


def sbar_element(datum: RootDatum, i: int, variables=("t",)) -> SymbolicGroupElement:
    one = LaurentPoly.const(tuple(variables), 1)
    return SymbolicGroupElement(datum, tuple(variables), (("x", i, -one), ("y", i, one), ("x", i, -one)))


def chart_variables(word: DoubleWord) -> tuple:
    return tuple(f"h{j}" for j in range(1, word.r + 1)) + tuple(f"t{k}" for k in range(1, word.n + 1))


def factorization_chart(word: DoubleWord, with_h: bool = True) -> SymbolicGroupElement:
    """h * x_{i_1}(t_1) ... x_{i_n}(t_n) in variables (h_1..h_r, t_1..t_n)."""
    variables = chart_variables(word)
    factors = []
    if with_h:
        factors.append(("h", tuple(LaurentPoly.var(variables, f"h{j}") for j in range(1, word.r + 1))))
    for k, i in enumerate(word.letters, start=1):
        factors.extend(elementary(word.datum, i, f"t{k}", variables).factors)
    return SymbolicGroupElement(word.datum, variables, tuple(factors))


def generalized_minor(u_word, v_word, i: int, g: SymbolicGroupElement) -> LaurentPoly:
    """Delta_{u omega_i, v omega_i}(g) as a matrix coefficient between extreme vectors."""
    datum = g.datum
    u = canonical_word(datum, u_word)
    v = canonical_word(datum, v_word)
    rep = rep_data(datum.name, i)
    row = rep.extreme_covector(u)
    col = rep.extreme_vector(v)
    m = g.matrix(rep)
    out = LaurentPoly(g.variables)
    for a in range(rep.dimension):
        if not row[a]:
            continue
        for b in range(rep.dimension):
            if col[b] and not m[a][b].is_zero():
                out = out + m[a][b] * (row[a] * col[b])
    return out


def gaussian_decompose(g: SymbolicGroupElement, rep: RepData):
    """LDU factorization g = g_- g_0 g_+ of the representing matrix (sympy rational functions)."""
    syms = sympy.symbols(g.variables)
    def to_sym(p: LaurentPoly):
        return sum((sympy.Rational(c.numerator, c.denominator) *
                    sympy.Mul(*[s ** e for s, e in zip(syms, chi)]) for chi, c in p.terms.items()),
                   sympy.Integer(0))
    m = sympy.Matrix([[to_sym(x) for x in row] for row in g.matrix(rep)])
    n = m.rows
    lower, upper = sympy.eye(n), sympy.zeros(n)
    work = m.copy()
    for k in range(n):
        pivot = sympy.cancel(work[k, k])
        if pivot == 0:
            raise NotDecomposable("vanishing principal minor")
        for j in range(k, n):
            upper[k, j] = sympy.cancel(work[k, j])
        for i in range(k + 1, n):
            lower[i, k] = sympy.cancel(work[i, k] / pivot)
            for j in range(k, n):
                work[i, j] = sympy.cancel(work[i, j] - lower[i, k] * upper[k, j])
    diag = sympy.diag(*[upper[k, k] for k in range(n)])
    plus = sympy.Matrix(n, n, lambda i, j: sympy.cancel(upper[i, j] / upper[i, i]))
    return lower, diag, plus


def principal_minors(g: SymbolicGroupElement) -> dict:
    """[g]_0^{omega_i} = Delta_{omega_i,omega_i}(g)."""
    return {i: generalized_minor((), (), i, g) for i in range(1, g.datum.rank + 1)}


# ---------------------------------------------------------------------------
# chart transition to the cluster chart
# ---------------------------------------------------------------------------

def cluster_minors(word: DoubleWord, with_h: bool = False) -> dict:
    """k -> (sign, PosRational) for Delta_k on the factorization chart.

    With with_h=False the minors are evaluated on z (the reduced-cell factor).
    """
    return _cluster_minors(word, with_h)


@lru_cache(maxsize=None)
def _cluster_minors(word: DoubleWord, with_h: bool) -> dict:
    g = factorization_chart(word, with_h=with_h)
    out = {}
    for k in word.all_indices:
        u, v, i = word.minor_data(k)
        out[k] = positivity_normalize(generalized_minor(u, v, i, g))
    return out


def chart_transition_to_cluster(word: DoubleWord) -> tuple:
    """(h, t) -> (h, Delta_k(z) for k in [-r,-1] and the exchangeable indices)."""
    minors = cluster_minors(word)
    variables = chart_variables(word)
    hs = tuple(PosRational.var(variables, f"h{j}") for j in range(1, word.r + 1))
    return hs + tuple(minors[k][1] for k in word.index_set)


def bz_last_letter_identities(word: DoubleWord) -> dict:
    """The two factorization-parameter identities for (w0, e) words."""
    datum = word.datum
    g = factorization_chart(word, with_h=False)
    w0 = datum.longest_word()
    i_m, i_1 = abs(word.letters[-1]), abs(word.letters[0])
    i1s = datum.istar(i_1)
    last = generalized_minor(w0, (i_m,), i_m, g)
    first = generalized_minor(w0 + (i1s,), (), i1s, g)
    return {"last": positivity_normalize(last), "first": positivity_normalize(first)}
