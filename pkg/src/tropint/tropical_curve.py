"""Min-plus tropical plane curves and their dual subdivisions.

A tropical polynomial ``T`` evaluates to ``min(c_ij + i*w1 + j*w2)``. Its
curve is the locus where that minimum is attained at least twice. The
curve is built from the regular subdivision of the Newton polygon induced
by lifting each monomial ``(i, j)`` to height ``c_ij``: every lower face
gives a vertex, every interior edge a bounded segment and every boundary
edge an unbounded ray. All coordinates are exact fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from tropint.puiseux import BivariatePoly

Point2 = Tuple[Fraction, Fraction]
Lattice = Tuple[int, int]
Direction = Tuple[int, int]


class EmptyCurve(ValueError):
    """A tropical polynomial with a single monomial has an empty curve."""


def point(a, b) -> Point2:
    return (Fraction(a), Fraction(b))


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def primitive(v) -> Tuple[Direction, Fraction]:
    """Split a nonzero rational vector as ``length * u`` with ``u`` primitive."""
    a, b = Fraction(v[0]), Fraction(v[1])
    if a == 0 and b == 0:
        raise ValueError("zero vector has no direction")
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    ia, ib = int(a * den), int(b * den)
    g = gcd(abs(ia), abs(ib))
    u = (ia // g, ib // g)
    return u, Fraction(g, den)


@dataclass(frozen=True)
class TropPoly:
    """Coefficient valuations ``c_ij`` keyed by monomial exponent ``(i, j)``."""

    coeffs: Mapping[Lattice, Fraction]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a tropical polynomial needs a nonempty support")
        object.__setattr__(
            self, "coeffs", {(int(i), int(j)): Fraction(c) for (i, j), c in sorted(self.coeffs.items())}
        )

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    @property
    def support(self) -> List[Lattice]:
        return list(self.coeffs)

    def __call__(self, w) -> Fraction:
        return trop_eval(self, w)

    def argmin(self, w) -> List[Lattice]:
        vals = {m: c + m[0] * w[0] + m[1] * w[1] for m, c in self.coeffs.items()}
        best = min(vals.values())
        return [m for m, v in vals.items() if v == best]

    def shifted(self, const=0, a=0, b=0) -> "TropPoly":
        """``c_ij + const + a*i + b*j``; moves the curve by ``(-a, -b)``."""
        return TropPoly({m: c + const + a * m[0] + b * m[1] for m, c in self.coeffs.items()})


def tropicalize_poly(f: BivariatePoly) -> TropPoly:
    if f.is_zero():
        raise ValueError("cannot tropicalize the zero polynomial")
    return TropPoly({m: c.val() for m, c in f.coeffs.items()})


def trop_eval(T: TropPoly, w) -> Fraction:
    w1, w2 = Fraction(w[0]), Fraction(w[1])
    return min(c + i * w1 + j * w2 for (i, j), c in T.coeffs.items())


@dataclass(frozen=True)
class DualCell:
    """A polygon of the regular subdivision.

    ``vertices`` are the polygon corners in counterclockwise order,
    ``points`` every support point lying on the lifted face, and ``normal``
    the curve vertex dual to this cell.
    """

    vertices: Tuple[Lattice, ...]
    points: Tuple[Lattice, ...]
    normal: Point2

    @property
    def twice_area(self) -> int:
        vs = self.vertices
        return abs(sum(cross(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))))

    def edges(self) -> Iterator[Tuple[Lattice, Lattice]]:
        vs = self.vertices
        for k in range(len(vs)):
            yield vs[k], vs[(k + 1) % len(vs)]


@dataclass(frozen=True)
class DualSubdivision:
    cells: Tuple[DualCell, ...]
    # 1-dimensional Newton polygon: the lower-hull edges of the segment
    edges: Tuple[Tuple[Lattice, Lattice], ...] = ()

    @property
    def is_degenerate(self) -> bool:
        return not self.cells


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    weight: int
    direction: Direction
    dual: Tuple[Lattice, Lattice]


@dataclass(frozen=True)
class Ray:
    base: int
    direction: Direction
    weight: int
    dual: Tuple[Lattice, Lattice]


@dataclass(frozen=True)
class Edge:
    """Geometric view of a curve edge; ``length`` is ``None`` for rays."""

    start: Point2
    direction: Direction
    length: Optional[Fraction]
    weight: int

    @property
    def end(self) -> Optional[Point2]:
        if self.length is None:
            return None
        return (self.start[0] + self.length * self.direction[0], self.start[1] + self.length * self.direction[1])

    def contains(self, p) -> bool:
        d = (p[0] - self.start[0], p[1] - self.start[1])
        if cross(d, self.direction) != 0:
            return False
        s = self.param(p)
        return s >= 0 and (self.length is None or s <= self.length)

    def param(self, p) -> Fraction:
        """Lattice distance of ``p`` from ``start`` along the edge line."""
        d = (p[0] - self.start[0], p[1] - self.start[1])
        u = self.direction
        return Fraction(d[0] * u[0] + d[1] * u[1], u[0] * u[0] + u[1] * u[1])

    def at(self, s) -> Point2:
        return (self.start[0] + s * self.direction[0], self.start[1] + s * self.direction[1])


@dataclass(frozen=True)
class TropCurve:
    vertices: Tuple[Point2, ...]
    segments: Tuple[Segment, ...]
    rays: Tuple[Ray, ...]
    dual: DualSubdivision = field(default_factory=lambda: DualSubdivision(()))

    def edges(self) -> List[Edge]:
        out = []
        for s in self.segments:
            p, q = self.vertices[s.start], self.vertices[s.end]
            _, length = primitive((q[0] - p[0], q[1] - p[1]))
            out.append(Edge(p, s.direction, length, s.weight))
        for r in self.rays:
            out.append(Edge(self.vertices[r.base], r.direction, None, r.weight))
        return out

    def contains(self, p) -> bool:
        return any(e.contains(p) for e in self.edges())

    def directions_at(self, p) -> Dict[Direction, int]:
        """Outgoing primitive directions (with weights) of the curve at ``p``."""
        out: Dict[Direction, int] = {}
        for e in self.edges():
            if not e.contains(p):
                continue
            s = e.param(p)
            u = e.direction
            if s > 0:
                neg = (-u[0], -u[1])
                out[neg] = out.get(neg, 0) + e.weight
            if e.length is None or s < e.length:
                out[u] = out.get(u, 0) + e.weight
        return out

    def bounding_points(self) -> List[Point2]:
        return list(self.vertices)


def _plane(p1, p2, p3):
    """Coefficients ``(alpha, b1, b2)`` of ``c = alpha + b1*i + b2*j`` through 3 lifted points."""
    (i1, j1, c1), (i2, j2, c2), (i3, j3, c3) = p1, p2, p3
    det = (i2 - i1) * (j3 - j1) - (i3 - i1) * (j2 - j1)
    b1 = Fraction((c2 - c1) * (j3 - j1) - (c3 - c1) * (j2 - j1), det)
    b2 = Fraction((i2 - i1) * (c3 - c1) - (i3 - i1) * (c2 - c1), det)
    return c1 - b1 * i1 - b2 * j1, b1, b2


def convex_hull(points: Sequence[Lattice]) -> List[Lattice]:
    """Counterclockwise hull corners (collinear boundary points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out: List[Lattice] = []
        for p in seq:
            while len(out) >= 2 and cross((out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                                          (p[0] - out[-2][0], p[1] - out[-2][1])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def dual_subdivision(T: TropPoly) -> DualSubdivision:
    lifted = [(i, j, c) for (i, j), c in T.coeffs.items()]
    cells: Dict[frozenset, DualCell] = {}
    for a, b, c in combinations(lifted, 3):
        if (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]) == 0:
            continue
        alpha, b1, b2 = _plane(a, b, c)
        on_face = []
        for p in lifted:
            h = p[2] - (alpha + b1 * p[0] + b2 * p[1])
            if h < 0:
                break
            if h == 0:
                on_face.append((p[0], p[1]))
        else:
            key = frozenset(on_face)
            if key not in cells:
                cells[key] = DualCell(tuple(convex_hull(on_face)), tuple(sorted(on_face)), (-b1, -b2))
    if cells:
        ordered = sorted(cells.values(), key=lambda cell: (cell.normal, cell.vertices))
        return DualSubdivision(tuple(ordered))
    return DualSubdivision((), _segment_lower_edges(T))


def _segment_lower_edges(T: TropPoly):
    """Lower-hull edges for a support lying on one line."""
    pts = sorted(T.coeffs)
    base = pts[0]
    u, _ = primitive((pts[-1][0] - base[0], pts[-1][1] - base[1]))
    pos = {m: primitive((m[0] - base[0], m[1] - base[1]))[1] if m != base else Fraction(0) for m in pts}
    chain: List[Lattice] = []
    for m in sorted(pts, key=lambda m: pos[m]):
        while len(chain) >= 2:
            p0, p1 = chain[-2], chain[-1]
            lhs = (pos[p1] - pos[p0]) * (T.coeffs[m] - T.coeffs[p0])
            rhs = (T.coeffs[p1] - T.coeffs[p0]) * (pos[m] - pos[p0])
            if lhs <= rhs:
                chain.pop()
            else:
                break
        chain.append(m)
    return tuple(zip(chain, chain[1:]))


def _inward_normal(edge: Tuple[Lattice, Lattice], cell: DualCell) -> Direction:
    p, q = edge
    e = (q[0] - p[0], q[1] - p[1])
    g = gcd(abs(e[0]), abs(e[1]))
    n = (-e[1] // g, e[0] // g)
    for m in cell.vertices:
        side = n[0] * (m[0] - p[0]) + n[1] * (m[1] - p[1])
        if side != 0:
            return n if side > 0 else (-n[0], -n[1])
    raise AssertionError("degenerate dual cell")


def _lattice_length(edge) -> int:
    p, q = edge
    return gcd(abs(q[0] - p[0]), abs(q[1] - p[1]))


def curve_of(T: TropPoly) -> TropCurve:
    """Tropical curve of ``T`` with weights from its dual subdivision."""
    if len(T.coeffs) < 2:
        raise EmptyCurve("a single monomial defines an empty tropical curve")
    dual = dual_subdivision(T)
    if dual.is_degenerate:
        return _curve_of_segment(T, dual)

    vertices = tuple(cell.normal for cell in dual.cells)
    owners: Dict[frozenset, List[int]] = {}
    edge_of: Dict[frozenset, Tuple[Lattice, Lattice]] = {}
    for k, cell in enumerate(dual.cells):
        for e in cell.edges():
            key = frozenset(e)
            owners.setdefault(key, []).append(k)
            edge_of.setdefault(key, tuple(sorted(e)))

    segments, rays = [], []
    for key in sorted(owners, key=lambda k: edge_of[k]):
        edge = edge_of[key]
        weight = _lattice_length(edge)
        ks = owners[key]
        if len(ks) == 2:
            a, b = sorted(ks)
            pa, pb = vertices[a], vertices[b]
            u, _ = primitive((pb[0] - pa[0], pb[1] - pa[1]))
            segments.append(Segment(a, b, weight, u, edge))
        else:
            (k,) = ks
            rays.append(Ray(k, _inward_normal(edge, dual.cells[k]), weight, edge))
    return TropCurve(vertices, tuple(segments), tuple(rays), dual)


def _curve_of_segment(T: TropPoly, dual: DualSubdivision) -> TropCurve:
    # Each lower edge gives a full line; it is stored as a 2-valent vertex
    # (the point of the line nearest the origin) with two opposite rays.
    vertices, rays = [], []
    for edge in dual.edges:
        m1, m2 = edge
        d = (m2[0] - m1[0], m2[1] - m1[1])
        rhs = T.coeffs[m1] - T.coeffs[m2]
        scale = Fraction(rhs, d[0] * d[0] + d[1] * d[1])
        base = (d[0] * scale, d[1] * scale)
        u, _ = primitive((-d[1], d[0]))
        k = len(vertices)
        vertices.append(base)
        weight = _lattice_length(edge)
        rays.append(Ray(k, u, weight, edge))
        rays.append(Ray(k, (-u[0], -u[1]), weight, edge))
    return TropCurve(tuple(vertices), (), tuple(rays), dual)


def is_smooth(T: TropPoly) -> bool:
    """True iff the dual subdivision is a unimodular triangulation."""
    dual = dual_subdivision(T)
    if dual.is_degenerate:
        return False
    return all(len(c.vertices) == 3 and c.twice_area == 1 and len(c.points) == 3 for c in dual.cells)


def check_balanced(C: TropCurve) -> bool:
    totals = [[0, 0] for _ in C.vertices]
    for s in C.segments:
        u, w = s.direction, s.weight
        totals[s.start][0] += w * u[0]
        totals[s.start][1] += w * u[1]
        totals[s.end][0] -= w * u[0]
        totals[s.end][1] -= w * u[1]
    for r in C.rays:
        totals[r.base][0] += r.weight * r.direction[0]
        totals[r.base][1] += r.weight * r.direction[1]
    return all(t == [0, 0] for t in totals)
