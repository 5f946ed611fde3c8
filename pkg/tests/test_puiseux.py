from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from tropint.puiseux import (
    INF, BivariatePoly, IdenticallyZeroResultant, PuiseuxScalar, UniPoly, newton_root_valuations, ps_arith,
    ps_val, resultant_wrt, T)
from tropint.polyparse import parse_poly


def ps(text):
    """Scalar from polynomial text with no x or y."""
    return parse_poly(text).coeffs.get((0, 0), PuiseuxScalar())


def test_val_examples():
    assert ps_val(T) == 1
    assert ps_val(PuiseuxScalar()) is INF
    assert ps_val(ps("1 - t^(1/4) - t")) == 0


def test_arith_examples():
    assert ps_arith(ps("1 - t^(1/3) - t"), 1, "sub") == ps("-t^(1/3) - t")
    assert ps_arith(ps("t^(1/2)"), ps("t^(1/3)"), "mul") == ps("t^(5/6)")
    assert ps_arith(ps("1 + t"), -1, "add") == T
    with pytest.raises(ValueError):
        ps_arith(1, 1, "div")


def test_canonical_form():
    # terms are (exponent, coefficient) pairs
    a = PuiseuxScalar([(F(1, 2), 2), (F(1, 2), -2), (0, 3)])
    assert a.terms == ((F(0), F(3)),)
    assert PuiseuxScalar([(1, 1), (1, 1)]) == PuiseuxScalar.monomial(2, 1)
    assert PuiseuxScalar([(2, 1), (F(1, 3), 5)]).terms == ((F(1, 3), F(5)), (F(2), F(1)))


def test_line_conic_resultant():
    f = parse_poly("(1 - t^(1/3) - t) + x + y")
    g = parse_poly("x + x*y + t*y")
    res = resultant_wrt(f, g, "y")
    assert res == UniPoly([ps("-t + t^(4/3) + t^2"), ps("t^(1/3)"), -1])
    assert sorted(newton_root_valuations(res).multiset()) == [F(1, 3), F(2, 3)]


def test_small_resultants():
    x, y = BivariatePoly.variable("x"), BivariatePoly.variable("y")
    assert resultant_wrt(x + y, x - y, "y") == UniPoly([0, 2])
    with pytest.raises(IdenticallyZeroResultant):
        resultant_wrt(x + y + 1, x + y + 1, "y")
    with pytest.raises(IdenticallyZeroResultant):
        resultant_wrt((x + y) * (x - 1), (x + y) * (y - 2), "x")
    with pytest.raises(ValueError):
        resultant_wrt(x + 1, x + y, "y")


def newton_of(vals):
    """Polynomial whose coefficient of degree i is t^vals[i] (None for zero)."""
    return UniPoly([0 if v is None else PuiseuxScalar.monomial(1, v) for v in vals])


@pytest.mark.parametrize("vals, expected", [
    ([1, 0, 0], [0, 1]),
    ([1, F(1, 4), 0], [F(1, 4), F(3, 4)]),
    ([1, F(3, 4), 0], [F(1, 2), F(1, 2)]),
    ([1, F(1, 3), 0], [F(1, 3), F(2, 3)]),
])
def test_newton_examples(vals, expected):
    assert newton_root_valuations(newton_of(vals)).multiset() == expected


def test_zero_roots_reported_separately():
    rv = newton_root_valuations(newton_of([None, None, 2, 0]))
    assert rv.zero_roots == 2 and rv.multiset() == [2]


exps = st.sampled_from([F(0), F(1, 3), F(1, 2), F(2, 3), F(1), F(3, 2), F(2), F(-1, 2)])
coeffs = st.fractions(min_value=-6, max_value=6, max_denominator=4).filter(lambda c: c != 0)
scalars = st.lists(st.tuples(exps, coeffs), min_size=1, max_size=3).map(PuiseuxScalar).filter(lambda a: not a.is_zero())


@given(scalars, scalars)
def test_val_multiplicative(a, b):
    assert ps_val(a * b) == ps_val(a) + ps_val(b)


@given(scalars, scalars)
def test_val_ultrametric(a, b):
    s = a + b
    if s.is_zero():
        return
    assert ps_val(s) >= min(ps_val(a), ps_val(b))
    if ps_val(a) != ps_val(b):
        assert ps_val(s) == min(ps_val(a), ps_val(b))


@given(st.lists(st.one_of(st.none(), scalars), min_size=2, max_size=6).filter(
    lambda cs: any(c is not None for c in cs)))
def test_root_count_is_degree_minus_order(cs):
    p = UniPoly([0 if c is None else c for c in cs])
    rv = newton_root_valuations(p)
    assert rv.count == p.degree - p.order()
    assert rv.zero_roots == p.order()


def _eval(u: UniPoly, a: PuiseuxScalar) -> PuiseuxScalar:
    acc = PuiseuxScalar()
    for c in reversed(u.coeffs):
        acc = acc * a + c
    return acc


def _as_x_poly(u: UniPoly) -> BivariatePoly:
    return BivariatePoly({(i, 0): c for i, c in enumerate(u.coeffs) if not c.is_zero()})


@settings(max_examples=60, deadline=None)
@given(scalars, scalars, scalars, st.lists(scalars, min_size=1, max_size=2))
def test_resultant_root_valuations_against_explicit_roots(k, v0, v1, gammas):
    """``f = y - u(x)``, ``g = y - v(x)`` with ``u - v = k * prod(x - gamma)``.

    The common zeros are ``(gamma, v(gamma))``, so the valuations are known
    without any Newton polygon.
    """
    v = UniPoly([v0, v1])
    diff = UniPoly([k])
    for gm in gammas:
        diff = diff * UniPoly([-gm, 1])
    u = v + diff
    assume(u.degree >= 1)  # k = -v1 with one root cancels the x term
    y = BivariatePoly.variable("y")
    f, g = y - _as_x_poly(u), y - _as_x_poly(v)
    xs = newton_root_valuations(resultant_wrt(f, g, "y"))
    assert sorted(xs.multiset()) == sorted(ps_val(gm) for gm in gammas)
    assert xs.zero_roots == 0
    # y-coordinates v(gamma); any that vanish show up as roots at zero
    yvals = [_eval(v, gm) for gm in gammas]
    ys = newton_root_valuations(resultant_wrt(f, g, "x"))
    assert sorted(ys.multiset()) == sorted(ps_val(b) for b in yvals if not b.is_zero())
    assert ys.zero_roots == sum(1 for b in yvals if b.is_zero())


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), scalars), min_size=2, max_size=4),
       st.lists(st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), scalars), min_size=2, max_size=4))
def test_resultant_symmetric_up_to_sign(fs, gs):
    f, g = BivariatePoly(dict(fs)), BivariatePoly(dict(gs))
    if f.degree_in("y") < 1 or g.degree_in("y") < 1:
        return
    try:
        r1 = resultant_wrt(f, g, "y")
    except IdenticallyZeroResultant:
        return
    r2 = resultant_wrt(g, f, "y")
    assert r1 == r2 or r1 == -r2
    assert newton_root_valuations(r1) == newton_root_valuations(r2)
