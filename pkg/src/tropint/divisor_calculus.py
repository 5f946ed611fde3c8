"""Piecewise-linear functions on metric graphs and their divisors.

The main entry points are :func:`find_certificate`, which decides whether
``D - E`` is the divisor of an integer-slope function supported on the
marked subcomplex ``S`` (and returns such a function), and
:func:`configuration_space`, which enumerates the polyhedral families of
zero configurations admitting such functions when ``S`` is a forest.

Sign convention: the order of a function at a point is minus the sum of its
outgoing slopes, so zeros are positive and poles negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from tropint._linalg import rref, solve_affine
from tropint.divisors import ArcEnd, ArcPoint, Divisor, NodePoint, RayEnd
from tropint.polyhedron import Polyhedron
from tropint.stable_intersection import IntersectionComplex
from tropint.tropical_curve import Direction, Edge, Point2, TropCurve, primitive


class CellNotOnCurve(ValueError):
    """A cell of the intersection complex does not lie on the curve."""


class SupportOutsideS(ValueError):
    """A divisor point lies outside the marked subcomplex."""


class CyclicSubcomplexUnsupported(ValueError):
    """Configuration enumeration needs the marked subcomplex to be a forest."""


@dataclass(frozen=True)
class Arc:
    """An arc from ``tail`` to ``head``; rays have ``head`` and ``length`` None."""

    tail: int
    head: Optional[int]
    length: Optional[Fraction]
    direction: Optional[Direction] = None

    @property
    def is_ray(self) -> bool:
        return self.head is None


@dataclass(frozen=True)
class MetricGraph:
    """Metric graph with an optional planar embedding and a marked subcomplex.

    ``nodes`` holds the embedded position of each node (or None for an
    abstract graph). ``marked_arcs``/``marked_nodes`` describe ``S``.
    """

    nodes: Tuple[Optional[Point2], ...]
    arcs: Tuple[Arc, ...]
    marked_arcs: FrozenSet[int] = frozenset()
    marked_nodes: FrozenSet[int] = frozenset()

    def __post_init__(self):
        for k in self.marked_arcs:
            a = self.arcs[k]
            if a.tail not in self.marked_nodes or (a.head is not None and a.head not in self.marked_nodes):
                raise ValueError(f"marked arc {k} has an unmarked endpoint; S must be closed")
        for a in self.arcs:
            if a.head is not None and (a.length is None or a.length <= 0):
                raise ValueError("finite arcs need a positive length")

    @property
    def embedded(self) -> bool:
        return all(p is not None for p in self.nodes)

    @property
    def attachments(self) -> List[int]:
        """Marked nodes incident to unmarked arcs."""
        out = set()
        for k, a in enumerate(self.arcs):
            if k in self.marked_arcs:
                continue
            for n in (a.tail, a.head):
                if n is not None and n in self.marked_nodes:
                    out.add(n)
        return sorted(out)

    def incident(self, n: int) -> Iterator[Tuple[int, int]]:
        """``(arc, sign)`` pairs at node ``n``; sign +1 when ``n`` is the tail."""
        for k, a in enumerate(self.arcs):
            if a.tail == n:
                yield k, 1
            if a.head == n:
                yield k, -1

    def node_point(self, n: int):
        p = self.nodes[n]
        return p if p is not None else NodePoint(n)

    def arc_point(self, k: int, x):
        a = self.arcs[k]
        x = Fraction(x)
        if x == 0:
            return self.node_point(a.tail)
        if a.length is not None and x == a.length:
            return self.node_point(a.head)
        p = self.nodes[a.tail]
        if p is None or a.direction is None:
            return ArcPoint(k, x)
        return (p[0] + x * a.direction[0], p[1] + x * a.direction[1])

    def ray_end(self, k: int):
        a = self.arcs[k]
        p = self.nodes[a.tail]
        if p is None or a.direction is None:
            return ArcEnd(k)
        return RayEnd.of_ray(p, a.direction)

    def locate(self, p) -> Optional[Tuple]:
        """Where a divisor point sits: ``("node", n)``, ``("arc", k, x)`` or ``("end", k)``."""
        if isinstance(p, NodePoint):
            return ("node", p.node) if 0 <= p.node < len(self.nodes) else None
        if isinstance(p, ArcPoint):
            return ("arc", p.arc, p.pos)
        if isinstance(p, ArcEnd):
            return ("end", p.arc)
        if isinstance(p, RayEnd):
            for k, a in enumerate(self.arcs):
                if a.is_ray and self.ray_end(k) == p:
                    return ("end", k)
            return None
        p = (Fraction(p[0]), Fraction(p[1]))
        for n, q in enumerate(self.nodes):
            if q == p:
                return ("node", n)
        for k, a in enumerate(self.arcs):
            q = self.nodes[a.tail]
            if q is None or a.direction is None:
                continue
            e = Edge(q, a.direction, a.length, 1)
            if e.contains(p):
                x = e.param(p)
                if x > 0 and (a.length is None or x < a.length):
                    return ("arc", k, x)
        return None

    def in_S(self, loc) -> bool:
        if loc[0] == "node":
            return loc[1] in self.marked_nodes
        return loc[1] in self.marked_arcs

    def marked_components(self) -> List[List[int]]:
        """Node sets of the connected components of ``S``."""
        parent = {n: n for n in self.marked_nodes}

        def find(n):
            while parent[n] != n:
                parent[n] = parent[parent[n]]
                n = parent[n]
            return n

        for k in self.marked_arcs:
            a = self.arcs[k]
            if a.head is not None:
                parent[find(a.tail)] = find(a.head)
        groups: Dict[int, List[int]] = {}
        for n in sorted(self.marked_nodes):
            groups.setdefault(find(n), []).append(n)
        return sorted(groups.values())

    def marked_is_forest(self) -> bool:
        finite = [k for k in self.marked_arcs if self.arcs[k].head is not None]
        if any(self.arcs[k].tail == self.arcs[k].head for k in finite):
            return False
        return len(finite) == len(self.marked_nodes) - len(self.marked_components())


def graph_of_curve(C: TropCurve, I: IntersectionComplex, extra_points: Sequence = ()) -> MetricGraph:
    """Metric graph of ``C`` subdivided at the 0-cells of ``I``, with ``S = I``."""
    edges = C.edges()
    for p in I.points:
        if not C.contains(p):
            raise CellNotOnCurve(f"0-cell {p} is not on the curve")
    for e in I.edges():
        probe = e.at(e.length / 2) if e.length is not None else e.at(1)
        if not C.contains(probe):
            raise CellNotOnCurve(f"1-cell through {e.start} is not on the curve")

    cut_points = list(I.points) + [
        (Fraction(p[0]), Fraction(p[1])) for p in extra_points if isinstance(p, tuple)]
    nodes: List[Point2] = list(C.vertices)
    index = {p: k for k, p in enumerate(nodes)}

    def node_of(p):
        if p not in index:
            index[p] = len(nodes)
            nodes.append(p)
        return index[p]

    arcs: List[Arc] = []
    for e in edges:
        cuts = sorted({e.param(p) for p in cut_points if e.contains(p)} - {Fraction(0)})
        if e.length is not None:
            cuts = [x for x in cuts if x < e.length]
        stops = [Fraction(0)] + cuts
        for a, b in zip(stops, stops[1:]):
            arcs.append(Arc(node_of(e.at(a)), node_of(e.at(b)), b - a, e.direction))
        last = stops[-1]
        if e.length is None:
            arcs.append(Arc(node_of(e.at(last)), None, None, e.direction))
        else:
            arcs.append(Arc(node_of(e.at(last)), node_of(e.end), e.length - last, e.direction))

    marked_nodes = frozenset(index[p] for p in I.points if p in index)
    marked_arcs = set()
    for k, a in enumerate(arcs):
        start = nodes[a.tail]
        probe = Edge(start, a.direction, a.length, 1)
        mid = probe.at(a.length / 2) if a.length is not None else probe.at(1)
        if I.contains(mid):
            marked_arcs.add(k)
    marked_nodes = marked_nodes | {n for k in marked_arcs for n in (arcs[k].tail, arcs[k].head) if n is not None}
    return MetricGraph(tuple(nodes), tuple(arcs), frozenset(marked_arcs), frozenset(marked_nodes))


@dataclass(frozen=True)
class PLFunc:
    """Continuous piecewise-linear function with integer slopes on a metric graph.

    ``pieces[k] = (breakpoints, slopes)`` for arc ``k``: breakpoints are the
    interior positions where the slope changes, and ``slopes`` has one more
    entry than ``breakpoints``. Slopes point from tail to head.
    """

    graph: MetricGraph
    node_values: Tuple[Fraction, ...]
    pieces: Tuple[Tuple[Tuple[Fraction, ...], Tuple[int, ...]], ...]

    def __post_init__(self):
        g = self.graph
        if len(self.node_values) != len(g.nodes) or len(self.pieces) != len(g.arcs):
            raise ValueError("PLFunc data does not match the graph")
        for k, (bps, slopes) in enumerate(self.pieces):
            a = g.arcs[k]
            if len(slopes) != len(bps) + 1:
                raise ValueError(f"arc {k}: need one more slope than breakpoints")
            if any(int(s) != s for s in slopes):
                raise ValueError(f"arc {k}: slopes must be integers")
            stops = [Fraction(0)] + list(bps) + ([a.length] if a.length is not None else [])
            if any(x >= y for x, y in zip(stops, stops[1:])):
                raise ValueError(f"arc {k}: breakpoints must increase strictly inside the arc")
            if a.head is not None:
                end = self.node_values[a.tail] + sum(
                    (s * (y - x) for s, x, y in zip(slopes, stops, stops[1:])), Fraction(0))
                if end != self.node_values[a.head]:
                    raise ValueError(f"arc {k}: not continuous at the head node")

    @classmethod
    def constant(cls, graph: MetricGraph, value=0) -> "PLFunc":
        return cls(graph, tuple(Fraction(value) for _ in graph.nodes), tuple(((), (0,)) for _ in graph.arcs))

    @classmethod
    def from_slopes(cls, graph: MetricGraph, node_values, pieces) -> "PLFunc":
        return cls(graph, tuple(Fraction(v) for v in node_values),
                   tuple((tuple(Fraction(b) for b in bps), tuple(int(s) for s in sl)) for bps, sl in pieces))

    def value_at(self, k: int, x) -> Fraction:
        x = Fraction(x)
        bps, slopes = self.pieces[k]
        v = self.node_values[self.graph.arcs[k].tail]
        prev = Fraction(0)
        for b, s in zip(list(bps) + [None], slopes):
            stop = x if b is None else min(b, x)
            if stop > prev:
                v += s * (stop - prev)
                prev = stop
            if b is None or x <= b:
                break
        return v

    def end_value(self, k: int):
        """Limit at the infinite end of ray arc ``k`` (a number or +/-inf)."""
        s = self.pieces[k][1][-1]
        if s > 0:
            return float("inf")
        if s < 0:
            return float("-inf")
        bps = self.pieces[k][0]
        return self.value_at(k, bps[-1] if bps else 0)

    def slopes_on(self, k: int) -> Tuple[int, ...]:
        return self.pieces[k][1]

    def _combine(self, other: "PLFunc", sign: int) -> "PLFunc":
        if other.graph != self.graph:
            raise ValueError("functions live on different graphs")
        pieces = []
        for (b1, s1), (b2, s2) in zip(self.pieces, other.pieces):
            bps = sorted(set(b1) | set(b2))
            slopes = [_slope_at(b1, s1, i, bps) + sign * _slope_at(b2, s2, i, bps) for i in range(len(bps) + 1)]
            pieces.append(_simplify(bps, slopes))
        values = tuple(a + sign * b for a, b in zip(self.node_values, other.node_values))
        return PLFunc(self.graph, values, tuple(pieces))

    def __add__(self, other):
        if isinstance(other, PLFunc):
            return self._combine(other, 1)
        c = Fraction(other)
        return PLFunc(self.graph, tuple(v + c for v in self.node_values), self.pieces)

    def __sub__(self, other):
        if isinstance(other, PLFunc):
            return self._combine(other, -1)
        return self + (-Fraction(other))

    def __neg__(self) -> "PLFunc":
        return PLFunc(self.graph, tuple(-v for v in self.node_values),
                      tuple((bps, tuple(-s for s in sl)) for bps, sl in self.pieces))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.node_values) and all(sl == (0,) for _, sl in self.pieces)

    def vanishes_off(self) -> bool:
        """True iff the function is 0 on every unmarked arc and at every attachment node."""
        g = self.graph
        for k, a in enumerate(g.arcs):
            if k in g.marked_arcs:
                continue
            if self.pieces[k][1] != (0,) or self.node_values[a.tail] != 0:
                return False
        return all(self.node_values[n] == 0 for n in g.attachments)


def _slope_at(bps, slopes, i, merged) -> int:
    """Slope of a piece list on the ``i``-th interval of a refined breakpoint list."""
    left = merged[i - 1] if i > 0 else None
    j = 0
    while j < len(bps) and left is not None and bps[j] <= left:
        j += 1
    return slopes[j]


def _simplify(bps, slopes):
    out_b, out_s = [], [slopes[0]]
    for b, s in zip(bps, slopes[1:]):
        if s != out_s[-1]:
            out_b.append(b)
            out_s.append(s)
    return tuple(out_b), tuple(out_s)


def divisor_of(h: PLFunc, graph: Optional[MetricGraph] = None) -> Divisor:
    """Divisor of ``h``: minus the sum of outgoing slopes at every point.

    The infinite end of a ray carries the slope pointing toward infinity,
    which makes the degree zero on every component.
    """
    g = graph or h.graph
    acc: Dict = {}

    def add(p, k):
        if k:
            acc[p] = acc.get(p, 0) + k

    for n in range(len(g.nodes)):
        out = 0
        for k, sign in g.incident(n):
            slopes = h.pieces[k][1]
            out += slopes[0] if sign > 0 else -slopes[-1]
        add(g.node_point(n), -out)
    for k, (bps, slopes) in enumerate(h.pieces):
        for b, s0, s1 in zip(bps, slopes, slopes[1:]):
            add(g.arc_point(k, b), s0 - s1)
        if g.arcs[k].is_ray:
            add(g.ray_end(k), slopes[-1])
    return Divisor(acc)


@dataclass
class _Refined:
    """``S`` cut at extra points: node keys, pieces, and the map back to arcs."""

    keys: List            # divisor point of every refined node
    node_of_graph: Dict[int, int]
    pieces: List[Tuple[int, Optional[int], Optional[Fraction], int]]  # tail, head, length, arc
    chains: Dict[int, List[Tuple[int, Fraction]]]  # arc -> [(piece, start position)]


def _refine(g: MetricGraph, cuts: Dict[int, List[Fraction]]) -> _Refined:
    keys = [g.node_point(n) for n in range(len(g.nodes))]
    node_of_graph = {n: n for n in range(len(g.nodes))}
    pieces, chains = [], {}
    for k in sorted(g.marked_arcs):
        a = g.arcs[k]
        xs = sorted(set(cuts.get(k, [])))
        prev_node, prev_x = a.tail, Fraction(0)
        chain = []
        for x in xs:
            keys.append(g.arc_point(k, x))
            nid = len(keys) - 1
            chain.append((len(pieces), prev_x))
            pieces.append((prev_node, nid, x - prev_x, k))
            prev_node, prev_x = nid, x
        chain.append((len(pieces), prev_x))
        pieces.append((prev_node, a.head, None if a.length is None else a.length - prev_x, k))
        chains[k] = chain
    return _Refined(keys, node_of_graph, pieces, chains)


def _slope_bound(D: Divisor, E: Divisor) -> int:
    return max(1, D.positive_part().degree + E.positive_part().degree)


def find_certificate(graph: MetricGraph, D: Divisor, E: Divisor, bound: Optional[int] = None) -> Optional[PLFunc]:
    """A function ``h`` with ``divisor_of(h) == D - E`` vanishing off ``S``, or None.

    ``S`` is cut at the support of ``D`` and ``E``; each piece gets one
    unknown integer slope and each node of ``S`` an unknown value. The
    divisor equations, continuity along pieces, value 0 at attachment nodes
    and one gauge per unattached component form an exact linear system.
    Slopes left free by the system are searched depth-first over
    ``[-bound, bound]`` in order of increasing absolute value.
    """
    g = graph
    diff = D - E
    cuts: Dict[int, List[Fraction]] = {}
    for p in list(D) + list(E):
        loc = g.locate(p)
        if loc is None or not g.in_S(loc):
            raise SupportOutsideS(f"divisor point {p} is not in the marked subcomplex")
        if loc[0] == "arc":
            cuts.setdefault(loc[1], []).append(Fraction(loc[2]))
    ref = _refine(g, cuts)

    s_nodes = sorted(set(g.marked_nodes) | set(range(len(g.nodes), len(ref.keys))))
    value_col = {n: i for i, n in enumerate(s_nodes)}
    nv = len(s_nodes)
    ncols = nv + len(ref.pieces)

    rows, rhs = [], []

    def row():
        return [Fraction(0)] * ncols

    for n in s_nodes:
        r = row()
        for pi, (tail, head, _, _) in enumerate(ref.pieces):
            if tail == n:
                r[nv + pi] -= 1
            if head == n:
                r[nv + pi] += 1
        rows.append(r)
        rhs.append(Fraction(diff.coefficient(ref.keys[n])))
    for pi, (tail, head, length, k) in enumerate(ref.pieces):
        r = row()
        if head is None:
            r[nv + pi] = Fraction(1)
            rows.append(r)
            rhs.append(Fraction(diff.coefficient(g.ray_end(k))))
        else:
            r[value_col[head]] += 1
            r[value_col[tail]] -= 1
            r[nv + pi] -= length
            rows.append(r)
            rhs.append(Fraction(0))
    attached = set(g.attachments)
    for n in sorted(attached):
        r = row()
        r[value_col[n]] = Fraction(1)
        rows.append(r)
        rhs.append(Fraction(0))
    for comp in g.marked_components():
        if not attached.intersection(comp):
            r = row()
            r[value_col[comp[0]]] = Fraction(1)
            rows.append(r)
            rhs.append(Fraction(0))

    for p in diff:
        loc = g.locate(p)
        if loc[0] == "end" and loc[1] not in g.marked_arcs:
            raise SupportOutsideS(f"ray end {p} is not in the marked subcomplex")

    if not rows:
        return PLFunc.constant(g)
    solution = _integral_solution(rows, rhs, ncols, nv, bound if bound is not None else _slope_bound(D, E))
    if solution is None:
        return None
    values = [Fraction(0)] * len(g.nodes)
    for n in g.marked_nodes:
        values[n] = solution[value_col[n]]
    pieces = []
    for k in range(len(g.arcs)):
        if k not in g.marked_arcs:
            pieces.append(((), (0,)))
            continue
        chain = ref.chains[k]
        bps = [start for _, start in chain[1:]]
        slopes = [int(solution[nv + pi]) for pi, _ in chain]
        pieces.append(_simplify(bps, slopes))
    return PLFunc(g, tuple(values), tuple(pieces))


def _integral_solution(rows, rhs, ncols, first_slope, bound) -> Optional[List[Fraction]]:
    """Solution of ``rows x = rhs`` with integer entries in columns ``>= first_slope``."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols)
    if any(r[ncols] != 0 for r in red[len(pivots):]):
        return None
    # free value columns (none when every component is gauged) are pinned to 0
    free = [c for c in range(ncols) if c not in pivots]
    slope_free = [c for c in free if c >= first_slope]
    pivot_rows = list(zip(pivots, red))

    # dependent slope columns and the free columns they involve
    checks = []
    for c, r in pivot_rows:
        if c >= first_slope:
            deps = [f for f in slope_free if r[f] != 0]
            checks.append((c, r, deps))

    def evaluate(r, assign):
        return r[ncols] - sum((r[f] * assign.get(f, 0) for f in free), Fraction(0))

    order = sorted(range(-bound, bound + 1), key=lambda v: (abs(v), v < 0))

    def dfs(i, assign):
        # propagate: any dependent slope whose free columns are all assigned must be integral
        for c, r, deps in checks:
            if all(f in assign for f in deps):
                if evaluate(r, assign).denominator != 1:
                    return None
        if i == len(slope_free):
            return dict(assign)
        for v in order:
            assign[slope_free[i]] = v
            found = dfs(i + 1, assign)
            if found is not None:
                return found
            del assign[slope_free[i]]
        return None

    assign = dfs(0, {})
    if assign is None:
        return None
    x = [Fraction(0)] * ncols
    for f in free:
        x[f] = Fraction(assign.get(f, 0))
    for c, r in pivot_rows:
        x[c] = evaluate(r, assign)
    return x


def certificate_is_sound(h: PLFunc, D: Divisor, E: Divisor) -> bool:
    """Independent re-check of a returned witness."""
    return divisor_of(h) == D - E and h.vanishes_off()


# --- configuration space -------------------------------------------------


@dataclass(frozen=True)
class ConfigCell:
    """One combinatorial family of zero configurations.

    ``node_zeros[n]`` zeros sit on node ``n`` and ``arc_zeros[k]`` zeros move
    in the open interior of arc ``k`` (arcs of ``S`` cut at the support of
    ``E``). The parameters are the sorted positions of the moving zeros,
    named in ``variables``; ``polytope`` constrains them (its closure).
    ``slopes[k]`` lists the slope on each sub-interval of arc ``k``.
    """

    graph: MetricGraph
    poles: Divisor
    node_zeros: Tuple[Tuple[int, int], ...]
    arc_zeros: Tuple[Tuple[int, int], ...]
    variables: Tuple[Tuple[int, int], ...]
    slopes: Tuple[Tuple[int, Tuple[int, ...]], ...]
    polytope: Polyhedron = field(compare=False)
    dimension: int = 0

    @property
    def pattern(self) -> Tuple:
        return (self.node_zeros, self.arc_zeros)

    def configuration(self, params: Sequence) -> Divisor:
        """Zero divisor at a parameter point."""
        acc = [(self.graph.node_point(n), k) for n, k in self.node_zeros]
        for (k, _), x in zip(self.variables, params):
            acc.append((self.graph.arc_point(k, x), 1))
        return Divisor(acc)

    def sample(self) -> Tuple[Fraction, ...]:
        """A parameter point in the relative interior."""
        return self.polytope.relative_interior_point()

    def vertex_configurations(self) -> List[Divisor]:
        return [self.configuration(v) for v in self.polytope.vertices()]

    def h_representation(self) -> Dict[str, list]:
        P = self.polytope
        return {
            "equalities": [(list(a), b) for a, b in zip(P.eq_lhs, P.eq_rhs)],
            "inequalities": [(list(a), b) for a, b in zip(P.ineq_lhs, P.ineq_rhs)],
        }


def _compositions(total: int, slots: int) -> Iterator[Tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _pattern_cell(g: MetricGraph, E: Divisor, node_zeros: Dict[int, int], arc_zeros: Dict[int, int]) -> Optional[ConfigCell]:
    s_nodes = sorted(g.marked_nodes)
    s_arcs = sorted(g.marked_arcs)
    # pieces of every arc, split by its moving zeros
    piece_cols: Dict[int, List[int]] = {}
    ncols = 0
    for k in s_arcs:
        piece_cols[k] = list(range(ncols, ncols + arc_zeros.get(k, 0) + 1))
        ncols += arc_zeros.get(k, 0) + 1

    rows, rhs = [], []
    for n in s_nodes:
        r = [Fraction(0)] * ncols
        for k, sign in g.incident(n):
            if k not in g.marked_arcs:
                continue
            if sign > 0:
                r[piece_cols[k][0]] -= 1
            else:
                r[piece_cols[k][-1]] += 1
        rows.append(r)
        rhs.append(Fraction(node_zeros.get(n, 0) - E.coefficient(g.node_point(n))))
    for k in s_arcs:
        cols = piece_cols[k]
        for c0, c1 in zip(cols, cols[1:]):
            r = [Fraction(0)] * ncols
            r[c0], r[c1] = Fraction(1), Fraction(-1)
            rows.append(r)
            rhs.append(Fraction(1))
        if g.arcs[k].is_ray:
            r = [Fraction(0)] * ncols
            r[cols[-1]] = Fraction(1)
            rows.append(r)
            rhs.append(Fraction(0))
    sol = solve_affine(rows, rhs) if rows else ([], [])
    if sol is None:
        return None
    flow, null = sol
    if null:
        raise CyclicSubcomplexUnsupported("slopes are not determined by the zero pattern")
    if any(v.denominator != 1 for v in flow):
        return None

    variables = [(k, i) for k in s_arcs for i in range(arc_zeros.get(k, 0))]
    var_col = {v: i for i, v in enumerate(variables)}
    value_col = {n: len(variables) + i for i, n in enumerate(s_nodes)}
    nx = len(variables)
    width = nx + len(s_nodes)
    eqs = []
    for k in s_arcs:
        a = g.arcs[k]
        if a.is_ray:
            continue
        cols = piece_cols[k]
        # value(head) - value(tail) = sum_j slope_j * (x_{j+1} - x_j), x_0 = 0, x_{m+1} = length
        coeffs = [Fraction(0)] * width
        coeffs[value_col[a.head]] += 1
        coeffs[value_col[a.tail]] -= 1
        m = arc_zeros.get(k, 0)
        for j in range(m):
            sj, sj1 = flow[cols[j]], flow[cols[j + 1]]
            coeffs[var_col[(k, j)]] -= sj - sj1
        eqs.append((coeffs, flow[cols[-1]] * a.length))
    attached = set(g.attachments)
    for n in sorted(attached):
        coeffs = [Fraction(0)] * width
        coeffs[value_col[n]] = Fraction(1)
        eqs.append((coeffs, 0))
    for comp in g.marked_components():
        if not attached.intersection(comp):
            coeffs = [Fraction(0)] * width
            coeffs[value_col[comp[0]]] = Fraction(1)
            eqs.append((coeffs, 0))

    x_eqs = _eliminate_values(eqs, nx, width)
    if x_eqs is None:
        return None
    ineqs = []
    for k in s_arcs:
        m = arc_zeros.get(k, 0)
        if m == 0:
            continue
        first = [Fraction(0)] * nx
        first[var_col[(k, 0)]] = Fraction(-1)
        ineqs.append((first, 0))
        for j in range(m - 1):
            r = [Fraction(0)] * nx
            r[var_col[(k, j)]], r[var_col[(k, j + 1)]] = Fraction(1), Fraction(-1)
            ineqs.append((r, 0))
        if g.arcs[k].length is not None:
            last = [Fraction(0)] * nx
            last[var_col[(k, m - 1)]] = Fraction(1)
            ineqs.append((last, g.arcs[k].length))
    P = Polyhedron.build(nx, x_eqs, ineqs)
    if not _open_cell_nonempty(P, g, variables):
        return None
    slopes = tuple((k, tuple(int(flow[c]) for c in piece_cols[k])) for k in s_arcs)
    return ConfigCell(
        g, E,
        tuple(sorted((n, c) for n, c in node_zeros.items() if c)),
        tuple(sorted((k, c) for k, c in arc_zeros.items() if c)),
        tuple(variables), slopes, P, P.dimension,
    )


def _open_cell_nonempty(P: Polyhedron, g: MetricGraph, variables) -> bool:
    # the open cell has every position strictly inside its arc and distinct
    # from its neighbours; with no moving zeros it is just the feasibility
    if not variables:
        return not P.is_empty()
    return P.has_open_interior()


def _eliminate_values(eqs, nx: int, width: int):
    """Project equalities in (positions, node values) onto the positions.

    Node values are solved for first; rows left with pivots among the
    positions are the constraints on the zeros. Returns None if infeasible.
    """
    if not eqs:
        return []
    # put value columns first so they are pivoted away before positions
    order = list(range(nx, width)) + list(range(nx))
    aug = [[c[i] for i in order] + [Fraction(b)] for c, b in eqs]
    red, pivots = rref(aug, width)
    nvals = width - nx
    out = []
    for r, p in zip(red, pivots):
        if p >= nvals:
            out.append((r[nvals:width], r[width]))
    for r in red[len(pivots):]:
        if r[width] != 0:
            return None
    return out


def configuration_space(graph: MetricGraph, E: Divisor) -> List[ConfigCell]:
    """Maximal cells of configurations ``D`` with ``D - E`` certified on ``S``.

    ``D`` ranges over effective divisors of degree ``deg E`` whose
    certificate has simple poles at ``E`` (cancellation with zeros allowed).
    Cells are indexed by where the zeros sit: on nodes of ``S`` or moving
    inside its arcs. A cell is maximal when no other cell degenerates to it
    by sliding moving zeros onto arc endpoints.
    """
    if not E.is_effective():
        raise ValueError("E must be effective")
    for p in E:
        loc = graph.locate(p)
        if loc is None or not graph.in_S(loc):
            raise SupportOutsideS(f"pole {p} is not in the marked subcomplex")
    g = split_at(graph, [p for p in E])
    if not g.marked_is_forest():
        raise CyclicSubcomplexUnsupported("configuration enumeration needs an acyclic S")

    cells = all_cells(g, E)
    return [c for c in cells if not any(_is_face(c, other) for other in cells if other is not c)]


def all_cells(g: MetricGraph, E: Divisor) -> List[ConfigCell]:
    """Every nonempty zero pattern on an already split graph."""
    s_nodes = sorted(g.marked_nodes)
    s_arcs = sorted(g.marked_arcs)
    n = E.degree
    out = []
    for counts in _compositions(n, len(s_nodes) + len(s_arcs)):
        node_zeros = dict(zip(s_nodes, counts[:len(s_nodes)]))
        arc_zeros = dict(zip(s_arcs, counts[len(s_nodes):]))
        cell = _pattern_cell(g, E, node_zeros, arc_zeros)
        if cell is not None:
            out.append(cell)
    return out


def _is_face(small: ConfigCell, big: ConfigCell) -> bool:
    """True if ``small`` arises from ``big`` by sliding moving zeros to arc ends."""
    g = big.graph
    bn, ba = dict(big.node_zeros), dict(big.arc_zeros)
    sn, sa = dict(small.node_zeros), dict(small.arc_zeros)
    if small.pattern == big.pattern:
        return False
    if any(sa.get(k, 0) > ba.get(k, 0) for k in set(sa) | set(ba)):
        return False
    moved = [(k, ba.get(k, 0) - sa.get(k, 0)) for k in sorted(ba) if ba.get(k, 0) > sa.get(k, 0)]
    choices = [range(r + 1) if g.arcs[k].head is not None else range(r, r + 1) for k, r in moved]
    for split in product(*choices):
        nodes = dict(bn)
        for (k, r), to_tail in zip(moved, split):
            a = g.arcs[k]
            nodes[a.tail] = nodes.get(a.tail, 0) + to_tail
            if r - to_tail:
                nodes[a.head] = nodes.get(a.head, 0) + (r - to_tail)
        if {n: c for n, c in nodes.items() if c} == {n: c for n, c in sn.items() if c}:
            return True
    return False


def faces_of(cell: ConfigCell, cells: Sequence[ConfigCell]) -> List[ConfigCell]:
    return [c for c in cells if _is_face(c, cell)]


def split_at(graph: MetricGraph, points: Sequence) -> MetricGraph:
    """Subdivide arcs at the given points (which become marked nodes if on S)."""
    cuts: Dict[int, List[Fraction]] = {}
    for p in points:
        loc = graph.locate(p)
        if loc is not None and loc[0] == "arc":
            cuts.setdefault(loc[1], []).append(Fraction(loc[2]))
    if not cuts:
        return graph
    nodes = list(graph.nodes)
    arcs: List[Arc] = []
    marked_arcs, marked_nodes = set(), set(graph.marked_nodes)
    for k, a in enumerate(graph.arcs):
        xs = sorted(set(cuts.get(k, [])))
        prev_node, prev_x = a.tail, Fraction(0)
        for x in xs:
            if graph.nodes[a.tail] is None:
                nodes.append(None)
            else:
                nodes.append(graph.arc_point(k, x))
            nid = len(nodes) - 1
            if k in graph.marked_arcs:
                marked_arcs.add(len(arcs))
                marked_nodes.add(nid)
            arcs.append(Arc(prev_node, nid, x - prev_x, a.direction))
            prev_node, prev_x = nid, x
        if k in graph.marked_arcs:
            marked_arcs.add(len(arcs))
        arcs.append(Arc(prev_node, a.head, None if a.length is None else a.length - prev_x, a.direction))
    return MetricGraph(tuple(nodes), tuple(arcs), frozenset(marked_arcs), frozenset(marked_nodes))
