"""Set-theoretic and stable intersections of two tropical plane curves."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from tropint.divisors import Divisor
from tropint.tropical_curve import Direction, Edge, Point2, TropCurve, convex_hull, cross, primitive
from tropint.puiseux import BivariatePoly

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


class GenericityFailure(RuntimeError):
    """Two generic displacements produced different stable intersections."""


@dataclass(frozen=True)
class IntersectionComplex:
    """Cells of ``C1 ∩ C2``.

    ``points`` are the 0-cells; ``segments`` join two of them and ``rays``
    leave one of them in a primitive direction. ``attachments`` maps a
    0-cell index to the directions of ``C1`` that leave the complex there.
    """

    points: Tuple[Point2, ...]
    segments: Tuple[Tuple[int, int], ...] = ()
    rays: Tuple[Tuple[int, Direction], ...] = ()
    attachments: Dict[int, Tuple[Direction, ...]] = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntersectionComplex):
            return NotImplemented
        return (self.points, self.segments, self.rays, self.attachments) == (
            other.points, other.segments, other.rays, other.attachments)

    def edges(self) -> List[Edge]:
        out = []
        for a, b in self.segments:
            p, q = self.points[a], self.points[b]
            u, length = primitive((q[0] - p[0], q[1] - p[1]))
            out.append(Edge(p, u, length, 1))
        for a, u in self.rays:
            out.append(Edge(self.points[a], u, None, 1))
        return out

    def contains(self, p) -> bool:
        p = (Fraction(p[0]), Fraction(p[1]))
        return p in self.points or any(e.contains(p) for e in self.edges())

    @property
    def dimension(self) -> int:
        return 1 if self.segments or self.rays else (0 if self.points else -1)

    def neighbours(self, k: int) -> List[int]:
        out = [b for a, b in self.segments if a == k] + [a for a, b in self.segments if b == k]
        return sorted(out)

    def is_bounded(self) -> bool:
        return not self.rays


def _line_key(u: Direction, p) -> Tuple[Direction, Fraction]:
    if u[0] < 0 or (u[0] == 0 and u[1] < 0):
        u = (-u[0], -u[1])
    return u, cross(u, p)


def _line_param(u: Direction, p) -> Fraction:
    return Fraction(p[0] * u[0] + p[1] * u[1], u[0] * u[0] + u[1] * u[1])


def _interval(e: Edge, u: Direction) -> Tuple[Optional[Fraction], Optional[Fraction]]:
    """Parameter interval of ``e`` on its line measured along ``u`` (None = infinite)."""
    a = _line_param(u, e.start)
    sign = 1 if e.direction == u else -1
    if e.length is None:
        return (a, None) if sign > 0 else (None, a)
    b = a + sign * e.length
    return (min(a, b), max(a, b))


def _lo_le(a, b) -> bool:
    """``a <= b`` for lower bounds where None is -inf."""
    return a is None or (b is not None and a <= b)


def _overlap(i1, i2):
    lo = i1[0] if i2[0] is None else (i2[0] if i1[0] is None else max(i1[0], i2[0]))
    hi = i1[1] if i2[1] is None else (i2[1] if i1[1] is None else min(i1[1], i2[1]))
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _crossing(e1: Edge, e2: Edge) -> Optional[Point2]:
    d = cross(e1.direction, e2.direction)
    r = (e2.start[0] - e1.start[0], e2.start[1] - e1.start[1])
    s = Fraction(cross(r, e2.direction), d)
    tau = Fraction(-cross(e1.direction, r), d)
    if s < 0 or (e1.length is not None and s > e1.length):
        return None
    if tau < 0 or (e2.length is not None and tau > e2.length):
        return None
    return e1.at(s)


def _merge_intervals(intervals):
    def lo_key(iv):
        return (0, 0) if iv[0] is None else (1, iv[0])

    out = []
    for iv in sorted(intervals, key=lo_key):
        if out:
            lo, hi = out[-1]
            if hi is None or (iv[0] is not None and iv[0] <= hi) or iv[0] is None:
                new_hi = None if (hi is None or iv[1] is None) else max(hi, iv[1])
                out[-1] = (lo, new_hi)
                continue
        out.append(iv)
    return out


def intersect_complex(C1: TropCurve, C2: TropCurve) -> IntersectionComplex:
    """Cell complex of the set-theoretic intersection of two curves."""
    edges1, edges2 = C1.edges(), C2.edges()
    lines: Dict[Tuple[Direction, Fraction], List] = {}
    isolated: List[Point2] = []
    for e1 in edges1:
        for e2 in edges2:
            if cross(e1.direction, e2.direction) != 0:
                p = _crossing(e1, e2)
                if p is not None:
                    isolated.append(p)
                continue
            if cross((e2.start[0] - e1.start[0], e2.start[1] - e1.start[1]), e1.direction) != 0:
                continue
            key = _line_key(e1.direction, e1.start)
            u = key[0]
            ov = _overlap(_interval(e1, u), _interval(e2, u))
            if ov is None:
                continue
            if ov[0] is not None and ov[0] == ov[1]:
                isolated.append(_at_param(key, ov[0]))
            else:
                lines.setdefault(key, []).append(ov)

    vertex_pool = list(C1.vertices) + list(C2.vertices) + isolated
    cells_pts: Dict[Point2, None] = {}
    seg_geo: List[Tuple[Point2, Point2]] = []
    ray_geo: List[Tuple[Point2, Direction]] = []
    for key in sorted(lines):
        u, _ = key
        for lo, hi in _merge_intervals(lines[key]):
            params = {s for s in (lo, hi) if s is not None}
            for v in vertex_pool:
                if cross(u, v) == key[1]:
                    s = _line_param(u, v)
                    if _lo_le(lo, s) and (hi is None or s <= hi):
                        params.add(s)
            if not params:
                params.add(Fraction(0))
            pts = [_at_param(key, s) for s in sorted(params)]
            cells_pts.update(dict.fromkeys(pts))
            seg_geo.extend(zip(pts, pts[1:]))
            if lo is None:
                ray_geo.append((pts[0], (-u[0], -u[1])))
            if hi is None:
                ray_geo.append((pts[-1], u))

    covering = [Edge(a, *primitive((b[0] - a[0], b[1] - a[1])), 1) for a, b in seg_geo]
    covering += [Edge(a, d, None, 1) for a, d in ray_geo]
    for p in isolated:
        if p not in cells_pts and not any(e.contains(p) for e in covering):
            cells_pts[p] = None

    points = tuple(sorted(cells_pts))
    index = {p: k for k, p in enumerate(points)}
    segments = tuple(sorted(tuple(sorted((index[p], index[q]))) for p, q in seg_geo))
    rays = tuple(sorted((index[p], d) for p, d in ray_geo))

    complex_dirs: Dict[int, set] = {k: set() for k in range(len(points))}
    for a, b in segments:
        pa, pb = points[a], points[b]
        complex_dirs[a].add(primitive((pb[0] - pa[0], pb[1] - pa[1]))[0])
        complex_dirs[b].add(primitive((pa[0] - pb[0], pa[1] - pb[1]))[0])
    for a, d in rays:
        complex_dirs[a].add(d)
    attachments = {}
    for k, p in enumerate(points):
        leaving = tuple(sorted(d for d in C1.directions_at(p) if d not in complex_dirs[k]))
        if leaving:
            attachments[k] = leaving
    return IntersectionComplex(points, segments, rays, attachments)


def _at_param(key, s) -> Point2:
    u, off = key
    # point on the line cross(u, p) = off with dot(p, u)/|u|^2 = s
    n2 = u[0] * u[0] + u[1] * u[1]
    return (s * u[0] - Fraction(off * u[1], n2), s * u[1] + Fraction(off * u[0], n2))


def _lex_sign(a: Fraction, b: Fraction) -> int:
    if a != 0:
        return 1 if a > 0 else -1
    return (b > 0) - (b < 0)


def _shifted_crossings(edges1: Sequence[Edge], edges2: Sequence[Edge], v) -> Optional[Divisor]:
    """Crossings of ``C1 + eps*v`` with ``C2`` as ``eps -> 0+``; None if ``v`` is not generic."""
    for e1 in edges1:
        if cross(v, e1.direction) == 0:
            return None
    acc: Dict[Point2, int] = {}
    for e1 in edges1:
        u1 = e1.direction
        for e2 in edges2:
            u2 = e2.direction
            d = cross(u1, u2)
            if d == 0:
                continue
            r0 = (e2.start[0] - e1.start[0], e2.start[1] - e1.start[1])
            s = (Fraction(cross(r0, u2), d), Fraction(-cross(v, u2), d))
            tau = (Fraction(-cross(u1, r0), d), Fraction(cross(u1, v), d))
            # s and tau must lie strictly inside their edges as eps -> 0+
            gaps = [s, tau]
            if e1.length is not None:
                gaps.append((e1.length - s[0], -s[1]))
            if e2.length is not None:
                gaps.append((e2.length - tau[0], -tau[1]))
            signs = [_lex_sign(a, b) for a, b in gaps]
            if 0 in signs:
                return None
            if all(sg > 0 for sg in signs):
                p = e2.at(tau[0])
                acc[p] = acc.get(p, 0) + e1.weight * e2.weight * abs(d)
    return Divisor(acc)


def displacement_vectors() -> Iterable[Tuple[Fraction, Fraction]]:
    for p in PRIMES:
        yield (Fraction(1), Fraction(1, p))


def stable_divisor(C1: TropCurve, C2: TropCurve, checks: int = 2) -> Divisor:
    """Stable intersection of ``C1`` and ``C2`` with multiplicities.

    ``C1`` is displaced by ``eps*v`` with ``v`` from a fixed generic
    sequence; coordinates carry an exact first-order ``eps`` part so the
    limit is taken symbolically. The answer from ``checks`` independent
    vectors must agree.
    """
    edges1, edges2 = C1.edges(), C2.edges()
    results = []
    for v in displacement_vectors():
        res = _shifted_crossings(edges1, edges2, v)
        if res is None:
            continue
        results.append(res)
        if len(results) == checks:
            break
    if not results:
        raise GenericityFailure("no generic displacement found")
    if any(r != results[0] for r in results[1:]):
        raise GenericityFailure(f"displacements disagree: {results}")
    return results[0]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: Tuple[Tuple[int, int], ...]

    @classmethod
    def of(cls, support: Iterable[Tuple[int, int]]) -> "NewtonPolygon":
        return cls(tuple(convex_hull(list(support))))

    @classmethod
    def of_poly(cls, f: BivariatePoly) -> "NewtonPolygon":
        return cls.of(f.support)

    @property
    def twice_area(self) -> int:
        vs = self.vertices
        if len(vs) < 3:
            return 0
        return abs(sum(cross(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))))

    def __add__(self, other: "NewtonPolygon") -> "NewtonPolygon":
        return NewtonPolygon.of((a[0] + b[0], a[1] + b[1]) for a in self.vertices for b in other.vertices)


def mixed_volume(N1: NewtonPolygon, N2: NewtonPolygon) -> int:
    """Normalized mixed area ``Area(N1+N2) - Area(N1) - Area(N2)`` (Euclidean areas)."""
    twice = (N1 + N2).twice_area - N1.twice_area - N2.twice_area
    assert twice % 2 == 0
    return twice // 2
