"""Exact Laurent polynomials, subtraction-free rational functions and their
min-plus tropicalization.

Tropical conventions follow the min convention throughout: a positive
Laurent polynomial sum_chi c_chi x^chi becomes xi -> min_chi <chi, xi>.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import sympy

from .errors import NotSubtractionFree, VariableContextError


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LaurentPoly:
    """Finite sum of c * x^chi with chi an integer tuple of fixed arity."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms=None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for chi, c in (terms or {}).items():
            c = _frac(c)
            if c == 0:
                continue
            chi = tuple(int(e) for e in chi)
            if len(chi) != n:
                raise VariableContextError("exponent arity does not match variables")
            clean[chi] = clean.get(chi, Fraction(0)) + c
            if clean[chi] == 0:
                del clean[chi]
        self.terms = clean

    # ---- constructors -----------------------------------------------------
    @classmethod
    def const(cls, variables, c) -> "LaurentPoly":
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, variables, name, power: int = 1) -> "LaurentPoly":
        variables = tuple(variables)
        chi = [0] * len(variables)
        chi[variables.index(name)] = power
        return cls(variables, {tuple(chi): 1})

    @classmethod
    def monomial(cls, variables, chi, c=1) -> "LaurentPoly":
        return cls(variables, {tuple(chi): c})

    # ---- arithmetic -------------------------------------------------------
    def _check(self, other: "LaurentPoly") -> None:
        if self.variables != other.variables:
            raise VariableContextError(f"{self.variables} vs {other.variables}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.const(self.variables, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for chi, c in other.terms.items():
            out[chi] = out.get(chi, Fraction(0)) + c
        return LaurentPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.variables, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = _frac(other)
            return LaurentPoly(self.variables, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                chi = tuple(x + y for x, y in zip(a, b))
                out[chi] = out.get(chi, Fraction(0)) + ca * cb
        return LaurentPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.monomial_inverse() ** (-k)
        out = LaurentPoly.const(self.variables, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.const(self.variables, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # ---- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def monomial_inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError("only monomials are invertible among Laurent polynomials")
        (chi, c), = self.terms.items()
        return LaurentPoly(self.variables, {tuple(-e for e in chi): 1 / c})

    def coefficients_positive(self) -> bool:
        return bool(self.terms) and all(c > 0 for c in self.terms.values())

    def evaluate(self, point) -> Fraction:
        total = Fraction(0)
        pt = [_frac(p) for p in point]
        for chi, c in self.terms.items():
            term = c
            for p, e in zip(pt, chi):
                if e:
                    term *= p ** e
            total += term
        return total

    def rename(self, variables) -> "LaurentPoly":
        return LaurentPoly(variables, self.terms)

    def embed(self, variables) -> "LaurentPoly":
        """Same polynomial in a larger variable context (names matched)."""
        variables = tuple(variables)
        pos = [variables.index(v) for v in self.variables]
        out = {}
        for chi, c in self.terms.items():
            new = [0] * len(variables)
            for p, e in zip(pos, chi):
                new[p] = e
            out[tuple(new)] = c
        return LaurentPoly(variables, out)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def format_poly(p: LaurentPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for chi in sorted(p.terms):
        c = p.terms[chi]
        factors = [v if e == 1 else f"{v}^{e}" for v, e in zip(p.variables, chi) if e]
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c} * " + "*".join(factors))
    return " + ".join(parts)


def det(matrix) -> LaurentPoly:
    """Determinant by Laplace expansion along rows, memoized on column subsets."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if n > 8:
        raise ValueError("determinant supported up to size 8")
    memo: dict = {}

    def minor(row: int, cols: tuple):
        if row == n:
            return None
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = None
        for pos, col in enumerate(cols):
            entry = matrix[row][col]
            if isinstance(entry, LaurentPoly) and entry.is_zero():
                continue
            if not isinstance(entry, LaurentPoly) and entry == 0:
                continue
            rest = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry if rest is None else entry * rest
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = 0
        memo[key] = total
        return total

    out = minor(0, tuple(range(n)))
    if not isinstance(out, LaurentPoly):
        ref = next(e for row in matrix for e in row if isinstance(e, LaurentPoly))
        out = LaurentPoly.const(ref.variables, out)
    return out


def matmul(a, b):
    """Product of matrices whose entries are LaurentPoly or rationals."""
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if _is_zero(x) or _is_zero(y):
                    continue
                acc = x * y if _is_zero(acc) else acc + x * y
            row.append(acc)
        out.append(row)
    return out


def _is_zero(x) -> bool:
    if isinstance(x, LaurentPoly):
        return x.is_zero()
    return x == 0


# ---------------------------------------------------------------------------
# subtraction-free rational functions
# ---------------------------------------------------------------------------

class PosRational:
    """numerator / denominator with strictly positive coefficients on both sides."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: LaurentPoly, denominator: LaurentPoly | None = None):
        if denominator is None:
            denominator = LaurentPoly.const(numerator.variables, 1)
        numerator._check(denominator)
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        if denominator.is_monomial():
            numerator = numerator * denominator.monomial_inverse()
            denominator = LaurentPoly.const(numerator.variables, 1)
        if not numerator.coefficients_positive() or not denominator.coefficients_positive():
            raise NotSubtractionFree("PosRational needs strictly positive coefficients")
        self.numerator = numerator
        self.denominator = denominator

    @property
    def variables(self):
        return self.numerator.variables

    @classmethod
    def var(cls, variables, name) -> "PosRational":
        return cls(LaurentPoly.var(variables, name))

    @classmethod
    def one(cls, variables) -> "PosRational":
        return cls(LaurentPoly.const(variables, 1))

    def __mul__(self, other):
        if not isinstance(other, PosRational):
            return PosRational(self.numerator * other, self.denominator)
        return PosRational(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self) -> "PosRational":
        return PosRational(self.denominator, self.numerator)

    def __add__(self, other):
        if self.denominator == other.denominator:
            return PosRational(self.numerator + other.numerator, self.denominator)
        return PosRational(self.numerator * other.denominator + other.numerator * self.denominator,
                           self.denominator * other.denominator)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PosRational(self.numerator ** k, self.denominator ** k)

    def __eq__(self, other):
        if not isinstance(other, PosRational):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        raise TypeError("PosRational is not hashable")

    def evaluate(self, point) -> Fraction:
        return self.numerator.evaluate(point) / self.denominator.evaluate(point)

    def substitute(self, values: Sequence["PosRational"]) -> "PosRational":
        """Compose with a tuple of PosRational functions, one per variable."""
        return substitute(self.numerator, values) / substitute(self.denominator, values)

    def simplify(self) -> "PosRational":
        """Cancel the polynomial gcd of numerator and denominator.

        Kept only when the reduced quotient is still visibly subtraction-free.
        """
        syms = sympy.symbols(self.variables) if self.variables else ()
        num, den = sympy.fraction(sympy.cancel(_to_sympy(self.numerator, syms) /
                                               _to_sympy(self.denominator, syms)))
        try:
            return PosRational(_from_sympy(num, self.variables, syms),
                               _from_sympy(den, self.variables, syms))
        except NotSubtractionFree:
            return self

    def __repr__(self):
        if self.denominator == 1:
            return f"PosRational({format_poly(self.numerator)})"
        return f"PosRational(({format_poly(self.numerator)}) / ({format_poly(self.denominator)}))"


def _to_sympy(p: LaurentPoly, syms):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) *
                       sympy.Mul(*[x ** e for x, e in zip(syms, chi)])
                       for chi, c in p.terms.items()])


def _from_sympy(expr, variables, syms) -> LaurentPoly:
    out = LaurentPoly(variables)
    for term in sympy.Add.make_args(sympy.expand(expr)):
        coeff, rest = term.as_coeff_Mul()
        powers = rest.as_powers_dict()
        chi = tuple(int(powers.get(x, 0)) for x in syms)
        out = out + LaurentPoly.monomial(variables, chi, Fraction(int(coeff.p), int(coeff.q)))
    return out


def substitute(p: LaurentPoly, values: Sequence[PosRational]) -> PosRational:
    if len(values) != len(p.variables):
        raise VariableContextError("one value per variable is required")
    out = None
    for chi, c in p.terms.items():
        if c <= 0:
            raise NotSubtractionFree("substitution needs positive coefficients")
        term = None
        for v, e in zip(values, chi):
            if e:
                f = v ** e
                term = f if term is None else term * f
        if term is None:
            term = PosRational.one(values[0].variables)
        term = term * c
        out = term if out is None else out + term
    return out


def positivity_normalize(p: LaurentPoly) -> tuple:
    """(sign, PosRational) with sign * p subtraction-free."""
    if p.is_zero():
        raise NotSubtractionFree("zero polynomial has no sign")
    signs = {c > 0 for c in p.terms.values()}
    if len(signs) > 1:
        raise NotSubtractionFree(f"mixed signs in {format_poly(p)}")
    s = 1 if signs.pop() else -1
    return s, PosRational(p * s)


# ---------------------------------------------------------------------------
# tropical side
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TropPoly:
    """min over affine forms <chi, xi> + c."""

    arity: int
    forms: tuple  # tuple of (coefficient tuple, constant)

    def __post_init__(self):
        for chi, _ in self.forms:
            if len(chi) != self.arity:
                raise VariableContextError("form arity mismatch")

    @classmethod
    def from_forms(cls, arity, forms) -> "TropPoly":
        uniq = set()
        for chi, c in forms:
            if any(_frac(x).denominator != 1 for x in chi):
                raise ValueError(f"non-integral exponent in {tuple(chi)}")
            uniq.add((tuple(int(x) for x in chi), _frac(c)))
        uniq = sorted(uniq)
        return cls(arity, tuple(uniq))

    def __call__(self, point) -> Fraction:
        if len(point) != self.arity:
            raise VariableContextError("point arity mismatch")
        pt = [_frac(x) for x in point]
        return min(sum((a * x for a, x in zip(chi, pt)), c) for chi, c in self.forms)

    def is_homogeneous(self) -> bool:
        return all(c == 0 for _, c in self.forms)

    def to_json(self) -> list:
        return [[list(chi), str(c) if c.denominator != 1 else int(c)] for chi, c in self.forms]


@dataclass(frozen=True)
class TropDiff:
    """f^t - g^t; g may be the constant-zero polynomial."""

    pos: TropPoly
    neg: TropPoly

    @property
    def arity(self) -> int:
        return self.pos.arity

    def __call__(self, point) -> Fraction:
        return self.pos(point) - self.neg(point)

    def is_linear(self) -> bool:
        return len(self.pos.forms) == 1 and len(self.neg.forms) == 1

    def linear_form(self) -> tuple:
        (a, ca), = self.pos.forms
        (b, cb), = self.neg.forms
        return tuple(x - y for x, y in zip(a, b)), ca - cb


def tropicalize_poly(p: LaurentPoly) -> TropPoly:
    if not p.coefficients_positive():
        raise NotSubtractionFree("tropicalization needs positive coefficients")
    return TropPoly.from_forms(len(p.variables), [(chi, 0) for chi in p.terms])


def tropicalize(f) -> TropDiff:
    if isinstance(f, LaurentPoly):
        f = PosRational(f)
    return TropDiff(tropicalize_poly(f.numerator), tropicalize_poly(f.denominator))


@dataclass(frozen=True)
class PLMap:
    components: tuple  # TropDiff each

    @property
    def arity(self) -> int:
        return self.components[0].arity if self.components else 0

    @property
    def coarity(self) -> int:
        return len(self.components)

    def __call__(self, point) -> tuple:
        return pl_eval(self, point)

    def then(self, other: "PLMap") -> "ComposedPL":
        return ComposedPL((self, other))


@dataclass(frozen=True)
class ComposedPL:
    maps: tuple

    def __call__(self, point) -> tuple:
        for m in self.maps:
            point = m(point)
        return point


@dataclass(frozen=True)
class LinearMap:
    """Integer/rational linear map used alongside PLMap (e.g. the comparison maps)."""

    matrix: tuple

    def __call__(self, point) -> tuple:
        return tuple(sum((_frac(a) * _frac(x) for a, x in zip(row, point)), Fraction(0))
                     for row in self.matrix)


def tropicalize_map(components: Iterable) -> PLMap:
    return PLMap(tuple(tropicalize(f) for f in components))


def pl_eval(m, point) -> tuple:
    if isinstance(m, PLMap):
        if m.components and len(point) != m.arity:
            raise VariableContextError("point arity mismatch")
        return tuple(c(point) for c in m.components)
    return m(point)


def pl_equal_on(m1, m2, samples) -> bool:
    return all(pl_eval(m1, p) == pl_eval(m2, p) for p in samples)


def exact_lp_min(cost, a_eq, b_eq):
    """min cost.x subject to a_eq x = b_eq, x >= 0, in exact rationals.

    Two-phase simplex with Bland's rule.  Returns the optimum, or None when
    infeasible.  Unbounded problems raise ValueError.
    """
    m, n = len(a_eq), len(cost)
    rows = []
    for i in range(m):
        r = [_frac(x) for x in a_eq[i]]
        b = _frac(b_eq[i])
        if b < 0:
            r, b = [-x for x in r], -b
        rows.append(r + [Fraction(int(j == i)) for j in range(m)] + [b])
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(pr, pc):
        piv = rows[pr][pc]
        rows[pr] = [x / piv for x in rows[pr]]
        for i in range(m):
            if i != pr and rows[i][pc] != 0:
                f = rows[i][pc]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pr])]
        basis[pr] = pc

    def run(obj, allowed):
        while True:
            # reduced costs
            red = [obj[j] - sum((obj[basis[i]] * rows[i][j] for i in range(m)), Fraction(0))
                   for j in range(width)]
            enter = next((j for j in range(width) if allowed[j] and red[j] < 0), None)
            if enter is None:
                return
            best = None
            for i in range(m):
                if rows[i][enter] > 0:
                    ratio = rows[i][-1] / rows[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                raise ValueError("unbounded linear program")
            pivot(best[1], enter)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(phase1, [True] * width)
    if sum((rows[i][-1] for i in range(m) if basis[i] >= n), Fraction(0)) != 0:
        return None
    # drive remaining artificial variables out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if rows[i][j] != 0), None)
            if j is not None:
                pivot(i, j)
    obj = [_frac(c) for c in cost] + [Fraction(0)] * m
    run(obj, [True] * n + [False] * m)
    return sum((obj[basis[i]] * rows[i][-1] for i in range(m)), Fraction(0))


def _is_redundant(form, others) -> bool:
    """form >= min(others) everywhere iff form's linear part is a convex combination of
    the others' linear parts whose combined constant does not exceed form's constant."""
    if not others:
        return False
    chi, c = form
    n, k = len(chi), len(others)
    a_eq = [[others[j][0][i] for j in range(k)] for i in range(n)] + [[1] * k]
    b_eq = list(chi) + [1]
    best = exact_lp_min([o[1] for o in others], a_eq, b_eq)
    return best is not None and best <= c


def trop_canonicalize(t: TropPoly) -> TropPoly:
    forms = list(t.forms)  # already deduplicated and sorted
    changed = True
    while changed:
        changed = False
        for idx, form in enumerate(forms):
            others = forms[:idx] + forms[idx + 1:]
            # cheap exact test first: a form equal to another plus a nonnegative constant
            if any(o[0] == form[0] and o[1] <= form[1] for o in others) or _is_redundant(form, others):
                forms = others
                changed = True
                break
    return TropPoly(t.arity, tuple(forms))


def parse_poly(text: str, variables: Sequence[str]) -> LaurentPoly:
    """Parse 'c * x1^e1*x2^e2 + ...' (the text exchange format)."""
    variables = tuple(variables)
    out = LaurentPoly(variables)
    text = text.replace(" ", "").replace("-", "+-").replace("^+-", "^-")
    for term in filter(None, text.split("+")):
        coeff = Fraction(1)
        chi = [0] * len(variables)
        for factor in term.split("*"):
            if not factor:
                continue
            if factor == "-":
                coeff = -coeff
                continue
            name, _, exp = factor.partition("^")
            neg = name.startswith("-")
            name = name.lstrip("-")
            if neg:
                coeff = -coeff
            if name in variables:
                chi[variables.index(name)] += int(exp or 1)
            else:
                coeff *= Fraction(name) ** int(exp or 1)
        out = out + LaurentPoly.monomial(variables, chi, coeff)
    return out
