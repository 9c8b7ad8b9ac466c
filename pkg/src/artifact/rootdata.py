"""Root data for the registered Cartan types.

Weights live in the fundamental-weight basis of h*, coweights in the
fundamental-coweight basis of h.  With these bases the roots are the columns
of the Cartan matrix A and the coroots are its rows, so lattice membership is
an integrality test.  The pairing between the two bases is A^{-T}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from importlib import resources
from math import lcm, prod

import sympy

from .errors import LatticeError, NotDominant, NotReduced, SymmetrizerMismatch, UnsupportedType

SIMPLY_CONNECTED = "simply_connected"
ADJOINT = "adjoint"
_ISOGENY_ALIASES = {"sc": SIMPLY_CONNECTED, "simply_connected": SIMPLY_CONNECTED,
                    "adj": ADJOINT, "ad": ADJOINT, "adjoint": ADJOINT}
_DUAL_TYPE = {"A": "A", "B": "C", "C": "B"}


def _registry() -> dict:
    text = resources.files("artifact").joinpath("data/types.json").read_text()
    return json.loads(text)


def _frac_matrix(m) -> tuple:
    return tuple(tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in row)
                 for row in m.tolist())


def _matvec(m, v) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def _is_int(x) -> bool:
    return Fraction(x).denominator == 1


@dataclass(frozen=True)
class CartanDatum:
    rank: int
    cartan: tuple
    symmetrizer: tuple
    lcm_d: int

    def __post_init__(self):
        r, a, d = self.rank, self.cartan, self.symmetrizer
        for i in range(r):
            if a[i][i] != 2:
                raise ValueError("diagonal entries must be 2")
            for j in range(r):
                if i != j and a[i][j] > 0:
                    raise ValueError("off-diagonal entries must be nonpositive")
                if a[i][j] * d[j] != a[j][i] * d[i]:
                    raise ValueError("symmetrizer does not symmetrize A")
        ad = sympy.Matrix(r, r, lambda i, j: a[i][j] * d[j])
        if not ad.is_positive_definite:
            raise ValueError("A D is not positive definite")
        if any(self.lcm_d % x for x in d):
            raise ValueError("d must be divisible by every d_i")

    @staticmethod
    def from_cartan(cartan) -> "CartanDatum":
        r = len(cartan)
        a = tuple(tuple(int(x) for x in row) for row in cartan)
        d = _smallest_symmetrizer(a)
        return CartanDatum(r, a, d, reduce(lcm, d, 1))


def _smallest_symmetrizer(a) -> tuple:
    # propagate ratios d_j/d_i = a_ji/a_ij along the Dynkin graph, then clear denominators
    r = len(a)
    d = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i != j and a[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * Fraction(a[j][i], a[i][j])
                    stack.append(j)
    den = reduce(lcm, (x.denominator for x in d), 1)
    ints = [int(x * den) for x in d]
    g = reduce(lambda p, q: __import__("math").gcd(p, q), ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class RootDatum:
    type: str
    isogeny: str
    cartan: CartanDatum
    char_basis: tuple      # rows: basis of X*(H) in the omega basis
    cochar_basis: tuple    # rows: basis of X_*(H) in the omega-vee basis
    psi_matrix: tuple      # psi in lattice bases: column j = image of cochar basis vector j

    # ---- basic data -------------------------------------------------------
    @property
    def rank(self) -> int:
        return self.cartan.rank

    @property
    def A(self) -> tuple:
        return self.cartan.cartan

    @property
    def d(self) -> tuple:
        return self.cartan.symmetrizer

    @property
    def lcm_d(self) -> int:
        return self.cartan.lcm_d

    @property
    def name(self) -> str:
        return f"{self.type}{self.rank}"

    @cached_property
    def pairing_matrix(self) -> tuple:
        return _frac_matrix(sympy.Matrix(self.A).T.inv())

    @property
    def psi_integral(self) -> bool:
        return all(_is_int(x) for row in self.psi_matrix for x in row)

    def simple_root(self, i: int) -> tuple:
        return tuple(Fraction(self.A[j][i - 1]) for j in range(self.rank))

    def simple_coroot(self, i: int) -> tuple:
        return tuple(Fraction(x) for x in self.A[i - 1])

    def fundamental_weight(self, i: int) -> tuple:
        return tuple(Fraction(int(j == i - 1)) for j in range(self.rank))

    fundamental_coweight = fundamental_weight

    @property
    def rho(self) -> tuple:
        return tuple(Fraction(1) for _ in range(self.rank))

    rho_vee = rho

    def pair(self, weight, coweight) -> Fraction:
        """<weight, coweight> for weight in omega coords, coweight in omega-vee coords."""
        p = self.pairing_matrix
        return sum((Fraction(weight[i]) * p[i][j] * coweight[j]
                    for i in range(self.rank) for j in range(self.rank)), Fraction(0))

    @cached_property
    def _gram_hstar(self) -> tuple:
        a = sympy.Matrix(self.A)
        dinv = sympy.diag(*[sympy.Rational(1, x) for x in self.d])
        return _frac_matrix(a.T.inv() * dinv)

    @cached_property
    def _gram_h(self) -> tuple:
        a = sympy.Matrix(self.A)
        return _frac_matrix(sympy.diag(*self.d) * a.T.inv())

    def form_hstar(self, x, y) -> Fraction:
        g = self._gram_hstar
        return sum((Fraction(x[i]) * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)),
                   Fraction(0))

    def form_h(self, x, y) -> Fraction:
        g = self._gram_h
        return sum((Fraction(x[i]) * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank)),
                   Fraction(0))

    @cached_property
    def psi_omega(self) -> tuple:
        """psi : h -> h* from omega-vee coordinates to omega coordinates (A D A^{-T})."""
        a = sympy.Matrix(self.A)
        return _frac_matrix(a * sympy.diag(*self.d) * a.T.inv())

    def psi(self, coweight) -> tuple:
        return _matvec(self.psi_omega, [Fraction(x) for x in coweight])

    # ---- lattices ---------------------------------------------------------
    def _coords(self, basis, vec, what) -> tuple:
        m = sympy.Matrix(basis).T
        sol = m.inv() * sympy.Matrix([sympy.Rational(Fraction(x).numerator, Fraction(x).denominator)
                                      for x in vec])
        out = tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in sol)
        if not all(_is_int(x) for x in out):
            raise LatticeError(f"{tuple(vec)} is not in {what}")
        return tuple(int(x) for x in out)

    def char_coords(self, weight) -> tuple:
        return self._coords(self.char_basis, weight, "X*(H)")

    def cochar_coords(self, coweight) -> tuple:
        return self._coords(self.cochar_basis, coweight, "X_*(H)")

    def from_char_coords(self, c) -> tuple:
        return tuple(sum((Fraction(c[k]) * self.char_basis[k][j] for k in range(self.rank)), Fraction(0))
                     for j in range(self.rank))

    def from_cochar_coords(self, c) -> tuple:
        return tuple(sum((Fraction(c[k]) * self.cochar_basis[k][j] for k in range(self.rank)), Fraction(0))
                     for j in range(self.rank))

    def psi_apply(self, coweight) -> tuple:
        """psi on X_*(H); returns omega coordinates, raising LatticeError off the lattices."""
        self.cochar_coords(coweight)
        image = self.psi(coweight)
        self.char_coords(image)
        return image

    # ---- Weyl group -------------------------------------------------------
    def reflect(self, i: int, weight) -> tuple:
        c = Fraction(weight[i - 1])
        return tuple(Fraction(weight[j]) - c * self.A[j][i - 1] for j in range(self.rank))

    def reflect_h(self, i: int, coweight) -> tuple:
        c = Fraction(coweight[i - 1])
        return tuple(Fraction(coweight[j]) - c * self.A[i - 1][j] for j in range(self.rank))

    def act(self, word, weight) -> tuple:
        """s_{w1} ... s_{wk} applied to a weight (rightmost letter acts first)."""
        out = tuple(Fraction(x) for x in weight)
        for i in reversed(tuple(word)):
            out = self.reflect(abs(i), out)
        return out

    def act_h(self, word, coweight) -> tuple:
        out = tuple(Fraction(x) for x in coweight)
        for i in reversed(tuple(word)):
            out = self.reflect_h(abs(i), out)
        return out

    def weyl(self, word) -> tuple:
        """Matrix of the word acting on h* in omega coordinates (columns are images of omega_j)."""
        cols = [self.act(word, self.fundamental_weight(j + 1)) for j in range(self.rank)]
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def is_reduced(self, word) -> bool:
        mu = self.rho
        for i in reversed(tuple(word)):
            i = abs(i)
            if not 1 <= i <= self.rank:
                return False
            if mu[i - 1] <= 0:
                return False
            mu = self.reflect(i, mu)
        return True

    def check_reduced(self, word) -> None:
        if not self.is_reduced(word):
            raise NotReduced(f"word {tuple(word)} is not reduced in {self.name}")

    @cached_property
    def _reduced_w0(self) -> tuple:
        memo: dict = {}

        def words(mu):
            if all(x > 0 for x in mu):
                return [()]
            if mu in memo:
                return memo[mu]
            out = []
            for i in range(1, self.rank + 1):
                if mu[i - 1] < 0:
                    out.extend((i,) + w for w in words(self.reflect(i, mu)))
            memo[mu] = out
            return out

        return tuple(sorted(words(tuple(-x for x in self.rho))))

    def reduced_words_of_w0(self) -> list:
        return list(self._reduced_w0)

    def longest_word(self) -> tuple:
        # alternating words such as (1,2,1,2) are preferred for readability
        return self._reduced_w0[0]

    @property
    def num_positive_roots(self) -> int:
        return len(self.longest_word())

    def w0(self, weight) -> tuple:
        return self.act(self.longest_word(), weight)

    def istar(self, i: int) -> int:
        target = tuple(-x for x in self.w0(self.simple_root(i)))
        for j in range(1, self.rank + 1):
            if self.simple_root(j) == target:
                return j
        raise AssertionError("w0 does not permute simple roots")

    def positive_roots(self, word=None) -> list:
        """(root, d_alpha) pairs in the order induced by a reduced word of w0."""
        word = tuple(word) if word is not None else self.longest_word()
        out = []
        for j, i in enumerate(word):
            root = self.act(word[:j], self.simple_root(i))
            out.append((root, self.d[i - 1]))
        return out

    def positive_coroots(self, word=None) -> list:
        word = tuple(word) if word is not None else self.longest_word()
        return [self.act_h(word[:j], self.simple_coroot(i)) for j, i in enumerate(word)]

    def is_dominant(self, weight) -> bool:
        return all(Fraction(x) >= 0 for x in weight)

    def weyl_dim(self, weight) -> Fraction:
        if not self.is_dominant(weight):
            raise NotDominant(f"{tuple(weight)} is not dominant")
        lam_rho = tuple(Fraction(x) + 1 for x in weight)
        num = prod((self.form_hstar(lam_rho, a) for a, _ in self.positive_roots()), start=Fraction(1))
        den = prod((self.form_hstar(self.rho, a) for a, _ in self.positive_roots()), start=Fraction(1))
        out = num / den
        return int(out) if out.denominator == 1 else out

    def denominator_identity_check(self) -> bool:
        lhs = prod((self.pair(a, self.rho_vee) for a, _ in self.positive_roots()), start=Fraction(1))
        rhs = prod((self.pair(self.rho, c) for c in self.positive_coroots()), start=Fraction(1))
        return lhs == rhs

    def d_product(self) -> int:
        return prod(d for _, d in self.positive_roots())

    # ---- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        def enc(m):
            return [[int(x) if _is_int(x) else str(x) for x in row] for row in m]
        return {
            "type": self.type,
            "rank": self.rank,
            "isogeny": self.isogeny,
            "cartan": [list(r) for r in self.A],
            "symmetrizer": list(self.d),
            "d": self.lcm_d,
            "char_basis": enc(self.char_basis),
            "psi_matrix": enc(self.psi_matrix),
        }


def _psi_lattice_matrix(cartan: CartanDatum, char_basis, cochar_basis) -> tuple:
    a = sympy.Matrix(cartan.cartan)
    psi = a * sympy.diag(*cartan.symmetrizer) * a.T.inv()
    out = sympy.Matrix(char_basis).T.inv() * psi * sympy.Matrix(cochar_basis).T
    return _frac_matrix(out)


def _assemble(typ, isogeny, cartan: CartanDatum) -> RootDatum:
    r = cartan.rank
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r))
    roots = tuple(tuple(Fraction(cartan.cartan[j][i]) for j in range(r)) for i in range(r))
    coroots = tuple(tuple(Fraction(x) for x in row) for row in cartan.cartan)
    if isogeny == SIMPLY_CONNECTED:
        char_basis, cochar_basis = ident, coroots
    else:
        char_basis, cochar_basis = roots, ident
    psi = _psi_lattice_matrix(cartan, char_basis, cochar_basis)
    return RootDatum(typ, isogeny, cartan, char_basis, cochar_basis, psi)


def build_datum(typ: str, rank: int, isogeny: str = SIMPLY_CONNECTED, strict: bool = True) -> RootDatum:
    """Root datum of the registered type.  With strict=True a symmetrizer that does not
    make psi integral on X_*(H) raises SymmetrizerMismatch."""
    key = f"{typ}{rank}"
    reg = _registry()
    if key not in reg:
        raise UnsupportedType(f"unsupported type {key}")
    try:
        iso = _ISOGENY_ALIASES[isogeny]
    except KeyError:
        raise UnsupportedType(f"unknown isogeny {isogeny!r}") from None
    datum = _assemble(typ, iso, CartanDatum.from_cartan(reg[key]["cartan"]))
    if strict and not datum.psi_integral:
        raise SymmetrizerMismatch(f"psi(X_*(H)) is not contained in X*(H) for {key} {iso}")
    return datum


def parse_group(spec: str) -> RootDatum:
    """Group names used by the CLI: A1, SL2, PSL2, B2 (=SO5), C2 (=Sp4), with optional ':adj'/':sc'."""
    named = {"SL2": ("A", 1, SIMPLY_CONNECTED), "PSL2": ("A", 1, ADJOINT),
             "SL3": ("A", 2, SIMPLY_CONNECTED), "PSL3": ("A", 2, ADJOINT),
             "SL4": ("A", 3, SIMPLY_CONNECTED), "SO5": ("B", 2, ADJOINT),
             "SP4": ("C", 2, SIMPLY_CONNECTED)}
    base, _, iso = spec.partition(":")
    if base.upper() in named:
        typ, rank, default_iso = named[base.upper()]
    else:
        if len(base) < 2 or not base[1:].isdigit():
            raise UnsupportedType(f"cannot parse group {spec!r}")
        typ, rank = base[0].upper(), int(base[1:])
        # B2 defaults to SO5 and C2 to Sp4, the pair of the worked example
        default_iso = ADJOINT if typ == "B" else SIMPLY_CONNECTED
    return build_datum(typ, rank, iso or default_iso, strict=False)


def langlands_dual(datum: RootDatum) -> RootDatum:
    r = datum.rank
    a_t = tuple(tuple(datum.A[j][i] for j in range(r)) for i in range(r))
    d_vee = tuple(datum.lcm_d // x for x in datum.d)
    cartan = CartanDatum(r, a_t, d_vee, datum.lcm_d)
    char_basis, cochar_basis = datum.cochar_basis, datum.char_basis
    iso = ADJOINT if datum.isogeny == SIMPLY_CONNECTED else SIMPLY_CONNECTED
    psi = _psi_lattice_matrix(cartan, char_basis, cochar_basis)
    return RootDatum(_DUAL_TYPE[datum.type], iso, cartan, char_basis, cochar_basis, psi)


def registered_data() -> list:
    out = []
    for key, entry in _registry().items():
        for iso in (SIMPLY_CONNECTED, ADJOINT):
            out.append(build_datum(key[0], int(key[1:]), iso, strict=False))
    return out
