"""From concrete polynomials to the tropical image of their intersection.

The x-coordinates of the points of ``X ∩ Y`` are the roots of the resultant
``Res_y(f, g)``; their valuations are read off its Newton polygon, and the
same goes for y with ``Res_x``. The two multisets are then paired into
points of the intersection complex. A valuation whose partner coordinate is
0 or infinite has no partner on the other side; it becomes the end of the
ray of ``Trop(X)`` pointing in that coordinate direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import List, Optional, Sequence, Tuple, Union

from tropint.divisor_calculus import MetricGraph, PLFunc, find_certificate, graph_of_curve
from tropint.divisors import Divisor, RayEnd
from tropint.puiseux import BivariatePoly, newton_root_valuations, resultant_wrt
from tropint.stable_intersection import (
    IntersectionComplex, NewtonPolygon, intersect_complex, mixed_volume, stable_divisor)
from tropint.tropical_curve import TropCurve, curve_of, tropicalize_poly


class NoAdmissiblePairing(RuntimeError):
    """No pairing of coordinate valuations lands on the intersection complex."""


@dataclass(frozen=True)
class AmbiguousPairing:
    """Several distinct divisors remain after pairing.

    ``candidates`` are all divisors whose points lie on the intersection
    complex; ``survivors`` are those admitting a certificate.
    """

    candidates: Tuple[Divisor, ...]
    survivors: Tuple[Divisor, ...]


def intersection_valuations(f: BivariatePoly, g: BivariatePoly):
    """Valuations of the x- and y-coordinates of the common zeros.

    Returns ``(xvals, yvals, dropped)`` where ``dropped = (zx, zy)`` counts
    the roots at 0 of ``Res_y`` and ``Res_x``.
    """
    rx = newton_root_valuations(resultant_wrt(f, g, "y"))
    ry = newton_root_valuations(resultant_wrt(f, g, "x"))
    return rx.multiset(), ry.multiset(), (rx.zero_roots, ry.zero_roots)


def _ends_on_line(graph: MetricGraph, axis: int, value: Fraction) -> List[RayEnd]:
    """Ray ends in ``S`` of rays parallel to the other axis on the line ``w[axis] = value``.

    An x-valuation without partner means y is 0 or infinite, so the point
    escapes along a vertical ray (and symmetrically for y).
    """
    other = 1 - axis
    out = []
    for k in sorted(graph.marked_arcs):
        a = graph.arcs[k]
        if not a.is_ray or a.direction[axis] != 0 or abs(a.direction[other]) != 1:
            continue
        if graph.nodes[a.tail][axis] == value:
            out.append(graph.ray_end(k))
    return out


def _candidates(xvals: Sequence[Fraction], yvals: Sequence[Fraction],
                I: IntersectionComplex, graph: MetricGraph) -> List[Divisor]:
    """Distinct admissible divisors from pairings with as many pairs as possible."""
    nx, ny = len(xvals), len(yvals)
    for m in range(min(nx, ny), -1, -1):
        found = {}
        for xs in combinations(range(nx), m):
            for ys in permutations(range(ny), m):
                pts = [(Fraction(xvals[i]), Fraction(yvals[j])) for i, j in zip(xs, ys)]
                if not all(I.contains(p) for p in pts):
                    continue
                loose = [_ends_on_line(graph, 0, xvals[i]) for i in range(nx) if i not in xs]
                loose += [_ends_on_line(graph, 1, yvals[j]) for j in range(ny) if j not in ys]
                if any(not ends for ends in loose):
                    continue
                for ends in product(*loose):
                    D = Divisor.from_points(pts + list(ends))
                    found.setdefault(D, None)
        if found:
            return list(found)
    return []


def assemble_divisor(xvals, yvals, I: IntersectionComplex, E: Divisor,
                     graph: MetricGraph) -> Union[Divisor, AmbiguousPairing]:
    cands = _candidates(list(xvals), list(yvals), I, graph)
    if not cands:
        raise NoAdmissiblePairing(f"no pairing of {list(xvals)} with {list(yvals)} lies on the intersection")
    if len(cands) == 1:
        return cands[0]
    survivors = tuple(D for D in cands if find_certificate(graph, D, E) is not None)
    if len(survivors) == 1:
        return survivors[0]
    return AmbiguousPairing(tuple(cands), survivors)


def outside_torus(D: Divisor) -> int:
    """Number of points of ``D`` (with multiplicity) sitting at ray ends."""
    return sum(k for p, k in D.items() if isinstance(p, RayEnd))


@dataclass(frozen=True)
class LiftReport:
    """Outcome of the end-to-end check for one pair ``(f, g)``.

    ``D`` is None when the pairing stays ambiguous; then ``ambiguity`` lists
    the candidates. ``falsified`` is set when a unique ``D`` has no
    certificate or when no candidate has one.
    """

    C1: TropCurve
    C2: TropCurve
    I: IntersectionComplex
    graph: MetricGraph
    E: Divisor
    D: Optional[Divisor]
    certificate: Optional[PLFunc]
    xvals: Tuple[Fraction, ...]
    yvals: Tuple[Fraction, ...]
    dropped: Tuple[int, int]
    matchings: int
    ambiguity: Optional[AmbiguousPairing]
    mixed_volume: int
    falsified: bool

    @property
    def outside_torus(self) -> int:
        return outside_torus(self.D) if self.D is not None else 0

    @property
    def torus_degree(self) -> int:
        return self.D.degree - self.outside_torus if self.D is not None else 0


def verify_main_theorem(f: BivariatePoly, g: BivariatePoly) -> LiftReport:
    C1 = curve_of(tropicalize_poly(f))
    C2 = curve_of(tropicalize_poly(g))
    I = intersect_complex(C1, C2)
    E = stable_divisor(C1, C2)
    graph = graph_of_curve(C1, I)
    xvals, yvals, dropped = intersection_valuations(f, g)
    cands = _candidates(xvals, yvals, I, graph)
    if not cands:
        raise NoAdmissiblePairing(f"no pairing of {xvals} with {yvals} lies on the intersection")

    D: Optional[Divisor] = None
    ambiguity = None
    certificate = None
    if len(cands) == 1:
        D = cands[0]
        certificate = find_certificate(graph, D, E)
    else:
        certified = [(c, find_certificate(graph, c, E)) for c in cands]
        survivors = [(c, h) for c, h in certified if h is not None]
        if len(survivors) == 1:
            D, certificate = survivors[0]
        else:
            ambiguity = AmbiguousPairing(tuple(cands), tuple(c for c, _ in survivors))
    falsified = certificate is None and (ambiguity is None or not ambiguity.survivors)
    mv = mixed_volume(NewtonPolygon.of_poly(f), NewtonPolygon.of_poly(g))
    return LiftReport(C1, C2, I, graph, E, D, certificate, tuple(xvals), tuple(yvals), dropped,
                      len(cands), ambiguity, mv, falsified)
