"""Exact arithmetic for finite Puiseux polynomials over the rationals.

A :class:`PuiseuxScalar` is a finite sum ``sum a_k t^{e_k}`` with rational
coefficients and rational exponents. :class:`UniPoly` and :class:`BivariatePoly`
are polynomials with such coefficients. Resultants are computed exactly and
root valuations are read off the lower Newton polygon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

Rat = Fraction
Scalarish = Union["PuiseuxScalar", Fraction, int]


class IdenticallyZeroResultant(ArithmeticError):
    """The resultant vanishes: the two curves share a common component."""


def _rat(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@total_ordering
class _Infinity:
    """+infinity for valuations of zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __hash__(self) -> int:
        return hash("tropint.INF")


INF = _Infinity()


class PuiseuxScalar:
    """Finite Puiseux polynomial ``sum coeff * t**exp``, kept canonical.

    Terms are stored as a tuple of ``(exp, coeff)`` pairs with strictly
    increasing exponents and nonzero coefficients. The empty tuple is zero.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Union[Mapping, Iterable[Tuple], None] = None):
        acc: Dict[Fraction, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exp, coeff in items:
                exp, coeff = _rat(exp), _rat(coeff)
                acc[exp] = acc.get(exp, Fraction(0)) + coeff
        self._terms: Tuple[Tuple[Fraction, Fraction], ...] = tuple(
            (e, c) for e, c in sorted(acc.items()) if c != 0
        )
        self._hash = None

    @classmethod
    def _from_canonical(cls, terms) -> "PuiseuxScalar":
        obj = cls.__new__(cls)
        obj._terms = tuple(terms)
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value: Scalarish) -> "PuiseuxScalar":
        if isinstance(value, PuiseuxScalar):
            return value
        value = _rat(value)
        return cls._from_canonical(((Fraction(0), value),) if value else ())

    @classmethod
    def monomial(cls, coeff=1, exp=0) -> "PuiseuxScalar":
        coeff = _rat(coeff)
        return cls._from_canonical(((_rat(exp), coeff),) if coeff else ())

    @property
    def terms(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def val(self):
        """Valuation: the smallest exponent, or ``INF`` for zero."""
        return self._terms[0][0] if self._terms else INF

    def leading_coefficient(self) -> Fraction:
        return self._terms[0][1] if self._terms else Fraction(0)

    def constant(self) -> Optional[Fraction]:
        """The value as a rational number if this scalar has no ``t``."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and self._terms[0][0] == 0:
            return self._terms[0][1]
        return None

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PuiseuxScalar.coerce(other)
        if not isinstance(other, PuiseuxScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def _merge(self, other: "PuiseuxScalar", sign: int) -> "PuiseuxScalar":
        a, b = self._terms, other._terms
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            if a[i][0] < b[j][0]:
                out.append(a[i])
                i += 1
            elif a[i][0] > b[j][0]:
                out.append((b[j][0], sign * b[j][1]))
                j += 1
            else:
                c = a[i][1] + sign * b[j][1]
                if c:
                    out.append((a[i][0], c))
                i += 1
                j += 1
        out.extend(a[i:])
        out.extend((e, sign * c) for e, c in b[j:])
        return PuiseuxScalar._from_canonical(out)

    def __add__(self, other: Scalarish) -> "PuiseuxScalar":
        if not isinstance(other, (PuiseuxScalar, int, Fraction)):
            return NotImplemented
        return self._merge(PuiseuxScalar.coerce(other), 1)

    __radd__ = __add__

    def __sub__(self, other: Scalarish) -> "PuiseuxScalar":
        if not isinstance(other, (PuiseuxScalar, int, Fraction)):
            return NotImplemented
        return self._merge(PuiseuxScalar.coerce(other), -1)

    def __rsub__(self, other: Scalarish) -> "PuiseuxScalar":
        return PuiseuxScalar.coerce(other) - self

    def __neg__(self) -> "PuiseuxScalar":
        return PuiseuxScalar._from_canonical((e, -c) for e, c in self._terms)

    def __mul__(self, other: Scalarish) -> "PuiseuxScalar":
        if not isinstance(other, (PuiseuxScalar, int, Fraction)):
            return NotImplemented
        other = PuiseuxScalar.coerce(other)
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) == 1:
            e0, c0 = other._terms[0]
            return PuiseuxScalar._from_canonical((e + e0, c * c0) for e, c in self._terms)
        acc: Dict[Fraction, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return PuiseuxScalar._from_canonical((e, c) for e, c in sorted(acc.items()) if c)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PuiseuxScalar":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural powers are supported")
        if len(self._terms) == 1:
            e, c = self._terms[0]
            return PuiseuxScalar.monomial(c**n, e * n)
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __repr__(self) -> str:
        return f"PuiseuxScalar({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


ZERO = PuiseuxScalar()
ONE = PuiseuxScalar.coerce(1)
T = PuiseuxScalar.monomial(1, 1)


def ps_val(a: PuiseuxScalar):
    return PuiseuxScalar.coerce(a).val()


def ps_arith(a: Scalarish, b: Scalarish, op: str) -> PuiseuxScalar:
    a, b = PuiseuxScalar.coerce(a), PuiseuxScalar.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def _format_exp(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e})"


def format_scalar(a: PuiseuxScalar) -> str:
    """Render in the input grammar, e.g. ``1 - t^(1/3) - t``."""
    if a.is_zero():
        return "0"
    parts = []
    for k, (e, c) in enumerate(a.terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            tpart = "t" if e == 1 else f"t^{_format_exp(e)}"
            body = tpart if mag == 1 else f"{mag}*{tpart}"
        if k == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


class UniPoly:
    """Dense univariate polynomial with :class:`PuiseuxScalar` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalarish] = ()):
        cs = [PuiseuxScalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: Tuple[PuiseuxScalar, ...] = tuple(cs)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        """Lowest degree with a nonzero coefficient (multiplicity of the root 0)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial has no order")

    def __getitem__(self, i: int) -> PuiseuxScalar:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else ZERO

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] - other[i] for i in range(n))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (PuiseuxScalar, int, Fraction)):
            other = PuiseuxScalar.coerce(other)
            return UniPoly(c * other for c in self.coeffs)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"UniPoly({format_unipoly(self)!r})"


def format_unipoly(p: UniPoly, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        terms.append(f"({c})*{mono}" if mono else f"({c})")
    return " + ".join(terms)


class BivariatePoly:
    """Sparse polynomial in ``x, y`` with Puiseux coefficients.

    ``coeffs`` maps ``(i, j)`` (exponents of ``x`` and ``y``) to nonzero
    :class:`PuiseuxScalar` values.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Union[Mapping[Tuple[int, int], Scalarish], None] = None):
        clean: Dict[Tuple[int, int], PuiseuxScalar] = {}
        for (i, j), c in (coeffs or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in monomial {(i, j)}")
            c = PuiseuxScalar.coerce(c)
            key = (int(i), int(j))
            c = clean.get(key, ZERO) + c
            if c:
                clean[key] = c
            else:
                clean.pop(key, None)
        self.coeffs: Dict[Tuple[int, int], PuiseuxScalar] = dict(sorted(clean.items()))

    @classmethod
    def variable(cls, name: str) -> "BivariatePoly":
        if name == "x":
            return cls({(1, 0): 1})
        if name == "y":
            return cls({(0, 1): 1})
        raise ValueError(f"unknown variable {name!r}")

    @classmethod
    def constant(cls, c: Scalarish) -> "BivariatePoly":
        return cls({(0, 0): c})

    @property
    def support(self) -> List[Tuple[int, int]]:
        return list(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree_in(self, var: str) -> int:
        k = _var_index(var)
        return max((m[k] for m in self.coeffs), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __add__(self, other) -> "BivariatePoly":
        other = _as_bivariate(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, ZERO) + c
        return BivariatePoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other) -> "BivariatePoly":
        return self + (-_as_bivariate(other))

    def __rsub__(self, other) -> "BivariatePoly":
        return _as_bivariate(other) - self

    def __mul__(self, other) -> "BivariatePoly":
        other = _as_bivariate(other)
        out: Dict[Tuple[int, int], PuiseuxScalar] = {}
        for (i1, j1), a in self.coeffs.items():
            for (i2, j2), b in other.coeffs.items():
                m = (i1 + i2, j1 + j2)
                out[m] = out.get(m, ZERO) + a * b
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivariatePoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural powers are supported")
        out = BivariatePoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def as_univariate(self, var: str) -> List[UniPoly]:
        """Coefficients in ``var`` as polynomials in the other variable.

        Entry ``k`` of the result is the coefficient of ``var**k``.
        """
        k = _var_index(var)
        deg = self.degree_in(var)
        rows: List[Dict[int, PuiseuxScalar]] = [{} for _ in range(deg + 1)]
        for m, c in self.coeffs.items():
            rows[m[k]][m[1 - k]] = c
        out = []
        for row in rows:
            top = max(row, default=-1)
            out.append(UniPoly(row.get(d, ZERO) for d in range(top + 1)))
        return out

    def __repr__(self) -> str:
        return f"BivariatePoly({self.coeffs!r})"


def _var_index(var: str) -> int:
    if var == "x":
        return 0
    if var == "y":
        return 1
    raise ValueError(f"variable must be 'x' or 'y', got {var!r}")


def _as_bivariate(value) -> BivariatePoly:
    if isinstance(value, BivariatePoly):
        return value
    if isinstance(value, (PuiseuxScalar, int, Fraction)):
        return BivariatePoly.constant(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to BivariatePoly")


def sylvester_matrix(p: List[UniPoly], q: List[UniPoly]) -> List[List[UniPoly]]:
    """Sylvester matrix of ``p, q`` given as coefficient lists (low degree first)."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    zero = UniPoly()
    rows = []
    for r in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[r + k] = p[m - k]
        rows.append(row)
    for r in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[r + k] = q[n - k]
        rows.append(row)
    return rows


def determinant(matrix: List[List[UniPoly]]) -> UniPoly:
    """Division-free determinant by Laplace expansion over column subsets.

    Row ``r`` is expanded against every subset of columns of size ``r + 1``,
    so the cost is ``O(n * 2**n)`` ring operations and no exact division is
    needed in the coefficient ring.
    """
    n = len(matrix)
    if n == 0:
        return UniPoly([1])
    # minors[cols] = det of the first len(cols) rows restricted to cols
    minors: Dict[Tuple[int, ...], UniPoly] = {(): UniPoly([1])}
    for r in range(n):
        nxt: Dict[Tuple[int, ...], UniPoly] = {}
        for cols in combinations(range(n), r + 1):
            acc = UniPoly()
            for pos, c in enumerate(cols):
                entry = matrix[r][c]
                if entry.is_zero():
                    continue
                sub = minors.get(cols[:pos] + cols[pos + 1:])
                if sub is None or sub.is_zero():
                    continue
                term = entry * sub
                acc = acc - term if (r + pos) % 2 else acc + term
            nxt[cols] = acc
        minors = nxt
    return minors[tuple(range(n))]


def resultant_wrt(f: BivariatePoly, g: BivariatePoly, var: str) -> UniPoly:
    """Resultant of ``f`` and ``g`` eliminating ``var``.

    The result is a polynomial in the remaining variable. Raises
    :class:`IdenticallyZeroResultant` when ``f`` and ``g`` have a common factor.
    """
    if f.degree_in(var) < 1 or g.degree_in(var) < 1:
        raise ValueError(f"both polynomials must have positive degree in {var}")
    res = determinant(sylvester_matrix(f.as_univariate(var), g.as_univariate(var)))
    if res.is_zero():
        raise IdenticallyZeroResultant(f"resultant with respect to {var} vanishes identically")
    return res


@dataclass(frozen=True)
class RootValuations:
    """Valuations of the nonzero roots of a polynomial.

    ``slopes`` pairs each valuation with its multiplicity, in increasing
    order of valuation. ``zero_roots`` is the multiplicity of the root 0.
    """

    slopes: Tuple[Tuple[Fraction, int], ...]
    zero_roots: int

    def multiset(self) -> List[Fraction]:
        return [v for v, k in self.slopes for _ in range(k)]

    @property
    def count(self) -> int:
        return sum(k for _, k in self.slopes)

    def __iter__(self) -> Iterator[Tuple[Fraction, int]]:
        return iter(self.slopes)


def lower_hull(points: List[Tuple[Fraction, Fraction]]) -> List[Tuple[Fraction, Fraction]]:
    """Lower convex hull of points sorted by abscissa (monotone chain)."""
    pts = sorted(points)
    hull: List[Tuple[Fraction, Fraction]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_root_valuations(p: UniPoly) -> RootValuations:
    """Valuations of the nonzero roots of ``p`` from its Newton polygon.

    Each lower-hull segment of ``{(i, val a_i)}`` with slope ``-v`` and
    horizontal length ``k`` contributes ``k`` roots of valuation ``v``.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no Newton polygon")
    pts = [(Fraction(i), c.val()) for i, c in enumerate(p.coeffs) if c]
    hull = lower_hull(pts)
    slopes: Dict[Fraction, int] = {}
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        v = -(y2 - y1) / (x2 - x1)
        slopes[v] = slopes.get(v, 0) + int(x2 - x1)
    return RootValuations(tuple(sorted(slopes.items())), p.order())
