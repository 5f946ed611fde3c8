from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import assume, given, settings, strategies as st

from tropint.fixtures import cubic
from tropint.polyparse import parse_poly
from tropint.tropical_curve import (
    EmptyCurve, Ray, TropCurve, TropPoly, check_balanced, curve_of, dual_subdivision, is_smooth, trop_eval,
    tropicalize_poly)

LINE = TropPoly({(0, 0): 0, (1, 0): 0, (0, 1): 0})
G12 = TropPoly({(1, 0): 0, (1, 1): 0, (0, 1): 1})


def test_tropicalize_examples():
    assert tropicalize_poly(parse_poly("2 + 3x + 5y")) == LINE
    assert tropicalize_poly(parse_poly("x + x*y + t*y")) == G12
    assert tropicalize_poly(parse_poly("t^3")) == TropPoly({(0, 0): 3})
    with pytest.raises(ValueError):
        tropicalize_poly(parse_poly("0"))


def test_trop_eval_examples():
    assert trop_eval(G12, (1, 0)) == 1
    assert G12.argmin((1, 0)) == [(0, 1), (1, 0), (1, 1)]
    assert trop_eval(LINE, (0, 0)) == 0
    assert trop_eval(TropPoly({(2, 3): F(1, 2)}), (F(1, 3), -1)) == F(1, 2) + F(2, 3) - 3


def test_line_curve():
    C = curve_of(LINE)
    assert C.vertices == ((0, 0),)
    assert not C.segments
    # min-plus: the ray directions are the negatives of the max-plus picture
    assert sorted(r.direction for r in C.rays) == [(-1, -1), (0, 1), (1, 0)]
    assert all(r.weight == 1 for r in C.rays)
    assert check_balanced(C)


def test_g_curve_vertex():
    C = curve_of(G12)
    assert C.vertices == ((1, 0),)
    assert sorted(r.direction for r in C.rays) == [(-1, 0), (0, -1), (1, 1)]


def test_cubic_triangle():
    T = tropicalize_poly(cubic(1, 1, 1))
    C = curve_of(T)
    assert sorted(C.vertices) == [(-1, -2), (-1, 1), (2, 1)]
    assert len(C.segments) == 3
    assert is_smooth(T)
    assert check_balanced(C)


def test_smoothness_examples():
    assert is_smooth(LINE)
    assert not is_smooth(TropPoly({(0, 0): 0, (2, 0): 0, (0, 2): 0, (1, 1): 1}))
    # strictly convex lifting i^2 + j^2 + (i + j)^2 of the degree-2 triangle
    conic = {(i, j): i * i + j * j + (i + j) ** 2 for i in range(3) for j in range(3) if i + j <= 2}
    assert is_smooth(TropPoly(conic))
    assert len(dual_subdivision(TropPoly(conic)).cells) == 4


def test_single_monomial_is_empty():
    with pytest.raises(EmptyCurve):
        curve_of(TropPoly({(1, 1): 0}))


def test_deleted_ray_unbalanced():
    C = curve_of(LINE)
    broken = TropCurve(C.vertices, C.segments, C.rays[:2], C.dual)
    assert not check_balanced(broken)
    heavier = TropCurve(C.vertices, C.segments, C.rays[:2] + (Ray(0, (-1, -1), 2, C.rays[2].dual),), C.dual)
    assert not check_balanced(heavier)


def test_weight_two_edges():
    # (1 + x)^2 with generic valuations on the middle term collapses to weight 2
    C = curve_of(TropPoly({(0, 0): 0, (2, 0): 0, (1, 0): 5}))
    assert [(r.direction, r.weight) for r in C.rays] == [((0, 1), 2), ((0, -1), 2)]
    assert check_balanced(C)


# --- properties over random supports ---

lattice = st.tuples(st.integers(0, 3), st.integers(0, 3))
values = st.fractions(min_value=-3, max_value=3, max_denominator=3)
trop_polys = st.dictionaries(lattice, values, min_size=2, max_size=7).map(TropPoly)


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and ((out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                                     - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def _boundary_lattice_length(points):
    h = _hull(points)
    return sum(gcd(q[0] - p[0], q[1] - p[1]) for p, q in zip(h, h[1:] + h[:1]))


def _full_dimensional(points):
    p0 = points[0]
    return any((p[0] - p0[0]) * (q[1] - p0[1]) != (p[1] - p0[1]) * (q[0] - p0[0]) for p in points for q in points)


@settings(max_examples=150, deadline=None)
@given(trop_polys)
def test_every_curve_is_balanced(T):
    assert check_balanced(curve_of(T))


@settings(max_examples=150, deadline=None)
@given(trop_polys)
def test_duality_counts(T):
    assume(_full_dimensional(T.support))
    C = curve_of(T)
    assert len(C.vertices) == len(dual_subdivision(T).cells)
    assert sum(r.weight for r in C.rays) == _boundary_lattice_length(T.support)


@settings(max_examples=100, deadline=None)
@given(trop_polys)
def test_vertices_and_edges_are_ties(T):
    C = curve_of(T)
    for e in C.edges():
        step = 1 if e.length is None else e.length / 2
        mid = (e.start[0] + step * e.direction[0], e.start[1] + step * e.direction[1])
        ties = T.argmin(mid)
        assert len(ties) >= 2
        # all tied monomials lie on one lattice line perpendicular to the edge
        i0, j0 = ties[0]
        assert all((i - i0) * e.direction[0] + (j - j0) * e.direction[1] == 0 for i, j in ties)
    if not dual_subdivision(T).is_degenerate:
        for v in C.vertices:
            assert len(T.argmin(v)) >= 3


@settings(max_examples=100, deadline=None)
@given(trop_polys, values, st.integers(-2, 2), st.integers(-2, 2))
def test_constant_and_translation(T, c, a, b):
    assume(_full_dimensional(T.support))
    C = curve_of(T)
    assert curve_of(T.shifted(const=c)) == C
    moved = curve_of(T.shifted(a=a, b=b))
    assert moved.vertices == tuple((x - a, y - b) for x, y in C.vertices)
    assert [(r.direction, r.weight) for r in moved.rays] == [(r.direction, r.weight) for r in C.rays]
    assert [(s.direction, s.weight) for s in moved.segments] == [(s.direction, s.weight) for s in C.segments]
