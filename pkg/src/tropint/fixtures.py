"""Polynomial families with known intersection behaviour.

Each builder returns a pair ``(f, g)`` of :class:`BivariatePoly`.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from tropint.puiseux import BivariatePoly, PuiseuxScalar, T

Pair = Tuple[BivariatePoly, BivariatePoly]

# d2 = EX54_D2_CONSTANT + 2 t^(r-s). Searching c in {1,...,5} for the value
# whose x-valuations come out as {2-s, -1+r, -1-s+r} gives c = 3 and only
# c = 3, both for (r, s) = (1/2, 1/4) and (2/3, 1/3); every other c gives
# {3/2, -1/2, -1} resp. {4/3, -1/3, -1}. See tests/test_lifting.py.
EX54_D2_CONSTANT = 3


def tpow(e, c=1) -> PuiseuxScalar:
    return PuiseuxScalar.monomial(c, Fraction(e))


def poly(terms: Dict[Tuple[int, int], object]) -> BivariatePoly:
    return BivariatePoly(terms)


def line_conic(c1=2, c2=3, c3=5, c4=7, c5=11, c6=13) -> Pair:
    """``f = c1 + c2 x + c3 y`` and ``g = c4 x + c5 xy + t c6 y``.

    The default constants are generic. With all of them equal to 1 the
    leading terms cancel and both zeros land on ``(1/2, 0)``.
    """
    f = poly({(0, 0): c1, (1, 0): c2, (0, 1): c3})
    g = poly({(1, 0): c4, (1, 1): c5, (0, 1): T * PuiseuxScalar.coerce(c6)})
    return f, g


def line_conic_r(r) -> Pair:
    """``c1 = 1 - t^r - t`` with all other coefficients 1."""
    return line_conic(1 - tpow(r) - T, 1, 1, 1, 1, 1)


def conic_conic() -> Pair:
    """``f = x + y + xy``, ``g = (1+t^(1/2))x + (1+t^(1/3))y + xy + t(x^2+y^2+1)``."""
    return conic_conic_type_i(Fraction(2, 3), Fraction(1, 6), double=False)


def conic_conic_generic(c=(1, 1, 1, 2, 4, 1, 1, 1, 1)) -> Pair:
    c1, c2, c3, c4, c5, c6, c7, c8, c9 = c
    f = poly({(1, 0): c1, (0, 1): c2, (1, 1): c3})
    g = poly({(1, 0): c4, (0, 1): c5, (1, 1): c6, (2, 0): T * c7, (0, 2): T * c8, (0, 0): T * c9})
    return f, g


def conic_conic_type_i(p, r, double=None) -> Pair:
    """Zeros ``{(-(p-r),0), (0,-p), (p,p), (-r,0)}`` for ``0 <= r <= p/2``."""
    p, r = Fraction(p), Fraction(r)
    if double is None:
        double = r == 0
    f = poly({(1, 0): 1, (0, 1): 1, (1, 1): 1})
    cx = 1 + tpow(1 - p + r, 2 if double else 1)
    cy = 1 + tpow(1 - p)
    g = poly({(1, 0): cx, (0, 1): cy, (1, 1): 1, (2, 0): T, (0, 2): T, (0, 0): T})
    return f, g


def conic_conic_type_ii(p, r) -> Pair:
    """Mirror of type (i) under ``x <-> y``."""
    f, g = conic_conic_type_i(p, r)
    return swap_xy(f), swap_xy(g)


def swap_xy(f: BivariatePoly) -> BivariatePoly:
    return poly({(j, i): c for (i, j), c in f.coeffs.items()})


def double_line(kind: str, r) -> Pair:
    """Two lines with the same tropicalization; the intersection moves along one ray.

    ``kind`` "i", "ii", "iii" put the point at ``(r,0)``, ``(0,r)``, ``(-r,-r)``.
    One coefficient of ``g`` is ``1 + t^r`` and a second one is 2; with that
    second coefficient equal to 1 the lines would be parallel or meet off
    the torus.
    """
    f = poly({(0, 0): 1, (1, 0): 1, (0, 1): 1})
    u = 1 + tpow(r)
    coeffs = {"i": {(0, 0): u, (1, 0): 2, (0, 1): 1},
              "ii": {(0, 0): 1, (1, 0): u, (0, 1): 2},
              "iii": {(0, 0): 2, (1, 0): 1, (0, 1): u}}[kind]
    return f, poly(coeffs)


def double_line_point(kind: str, r):
    r = Fraction(r)
    return {"i": (r, Fraction(0)), "ii": (Fraction(0), r), "iii": (-r, -r)}[kind]


def double_line_at_infinity() -> Pair:
    """``x + y + 1`` and ``x + 2y + 1`` meet at ``(-1, 0)``, outside the torus."""
    return poly({(0, 0): 1, (1, 0): 1, (0, 1): 1}), poly({(0, 0): 1, (1, 0): 1, (0, 1): 2})


def transversal_lines() -> Pair:
    """Two tropical lines with distinct vertices meeting in one transversal point."""
    return poly({(0, 0): 1, (1, 0): 1, (0, 1): 1}), poly({(0, 0): 1, (1, 0): T, (0, 1): T * T})


def cubic(c1, c2, c3) -> BivariatePoly:
    """``xy + t (c1 x + c2 y^2 + c3 x^2 y)``."""
    return poly({(1, 1): 1, (1, 0): T * c1, (0, 2): T * c2, (2, 1): T * c3})


def cubic_cubic(r, s, d2_constant: int = EX54_D2_CONSTANT) -> Pair:
    """Two points on the top edge of the triangle, one on the diagonal edge."""
    r, s = Fraction(r), Fraction(s)
    f = cubic(3 + tpow(r), 3, 1)
    g = cubic(3, d2_constant + tpow(r - s, 2), 2)
    return f, g


def cubic_cubic_generic(c=(1, 2, 3), d=(5, 7, 11)) -> Pair:
    return cubic(*c), cubic(*d)


def cubic_triangle_points(r, s):
    """The three target zeros on the triangle with vertices (-1,1), (2,1), (-1,-2)."""
    r, s = Fraction(r), Fraction(s)
    return [(-1 + r, Fraction(1)), (2 - s, Fraction(1)), (-1 - s + r, -2 - s + r)]


FIXTURE_PAIRS: Dict[str, Callable[[], Pair]] = {
    "line_conic": line_conic,
    "conic_conic": conic_conic,
    "double_line": lambda: double_line("i", Fraction(1, 2)),
    "transversal_lines": transversal_lines,
    "cubic_cubic": lambda: cubic_cubic(Fraction(1, 2), Fraction(1, 4)),
}

# mixed volumes of the Newton polygons of each pair
FIXTURE_MIXED_VOLUMES = {
    "line_conic": 2,
    "conic_conic": 4,
    "double_line": 1,
    "transversal_lines": 1,
    "cubic_cubic": 3,
}


def random_unit(rng: random.Random) -> PuiseuxScalar:
    """A random valuation-0 unit ``a + b t^e`` with small rational ``a != 0``."""
    a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4))
    b = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    e = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    return a + tpow(e, b)


def perturb(f: BivariatePoly, rng: random.Random) -> BivariatePoly:
    """Multiply every coefficient by an independent random unit."""
    return poly({m: c * random_unit(rng) for m, c in f.coeffs.items()})


STRESS_FAMILIES: Dict[str, Callable[[], Pair]] = {
    "line_conic": line_conic,
    "line_conic_r": lambda: line_conic_r(Fraction(1, 3)),
    "conic_conic": conic_conic,
    "double_line": lambda: double_line("i", Fraction(1, 2)),
    "cubic_cubic": lambda: cubic_cubic(Fraction(1, 2), Fraction(1, 4)),
}


def random_support_pair(rng: random.Random, max_terms: int = 6, box: int = 3) -> Pair:
    """Two polynomials with random supports (2 to ``max_terms`` monomials) and valuations."""

    def one():
        k = rng.randint(2, max_terms)
        support: List[Tuple[int, int]] = []
        while len(support) < k:
            m = (rng.randint(0, box), rng.randint(0, box))
            if m not in support:
                support.append(m)
        return poly({m: tpow(Fraction(rng.randint(-4, 4), rng.randint(1, 3)), rng.randint(1, 5)) for m in support})

    return one(), one()
