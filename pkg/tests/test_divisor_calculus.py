import random
from fractions import Fraction as F

import pytest

from tropint.divisor_calculus import (
    Arc, CellNotOnCurve, CyclicSubcomplexUnsupported, MetricGraph, PLFunc, SupportOutsideS, all_cells,
    certificate_is_sound, configuration_space, divisor_of, faces_of, find_certificate, graph_of_curve)
from tropint.divisors import ArcEnd, ArcPoint, Divisor, NodePoint, RayEnd
from tropint.fixtures import FIXTURE_PAIRS, double_line
from tropint.stable_intersection import IntersectionComplex, intersect_complex, stable_divisor
from tropint.tropical_curve import curve_of, tropicalize_poly

from support import random_plfunc


def setting(f, g):
    C1, C2 = curve_of(tropicalize_poly(f)), curve_of(tropicalize_poly(g))
    I = intersect_complex(C1, C2)
    return graph_of_curve(C1, I), stable_divisor(C1, C2)


def fixture_setting(name):
    return setting(*FIXTURE_PAIRS[name]())


def path(lengths, marked=True):
    arcs = tuple(Arc(k, k + 1, F(x)) for k, x in enumerate(lengths))
    n = len(lengths) + 1
    if not marked:
        return MetricGraph((None,) * n, arcs)
    return MetricGraph((None,) * n, arcs, frozenset(range(len(arcs))), frozenset(range(n)))


# --- graph_of_curve ---

def test_segment_graph():
    G, _ = fixture_setting("line_conic")
    marked = [G.arcs[k] for k in G.marked_arcs]
    assert len(marked) == 1 and marked[0].length == 1
    assert sorted(G.nodes[n] for n in G.attachments) == [(0, 0), (1, 0)]


def test_star_graph():
    G, _ = fixture_setting("conic_conic")
    legs = [G.arcs[k] for k in G.marked_arcs]
    assert len(legs) == 3 and all(a.length == 1 for a in legs)
    centre = G.nodes.index((0, 0))
    assert all(centre in (a.tail, a.head) for a in legs)
    assert G.marked_is_forest()


def test_double_line_graph_is_all_of_s():
    G, _ = setting(*double_line("i", 1))
    assert len(G.marked_arcs) == 3
    assert all(a.is_ray for a in G.arcs)
    assert G.attachments == []


def test_cell_not_on_curve():
    C = curve_of(tropicalize_poly(FIXTURE_PAIRS["line_conic"]()[0]))
    with pytest.raises(CellNotOnCurve):
        graph_of_curve(C, IntersectionComplex(((F(1), F(1)),)))


# --- divisor_of ---

def test_constant_has_empty_divisor():
    G, _ = fixture_setting("conic_conic")
    assert divisor_of(PLFunc.constant(G, 5)) == Divisor()


def test_tent():
    h = PLFunc.from_slopes(path([1]), [0, 0], [((F(1, 2),), (1, -1))])
    assert divisor_of(h) == Divisor({ArcPoint(0, F(1, 2)): 2, NodePoint(0): -1, NodePoint(1): -1})


def test_path_bookkeeping():
    # slopes -2, -1, 3, -1, 0 on five unit arcs
    slopes = [-2, -1, 3, -1, 0]
    values = [0]
    for s in slopes:
        values.append(values[-1] + s)
    h = PLFunc.from_slopes(path([1] * 5), values, [((), (s,)) for s in slopes])
    D = divisor_of(h)
    assert [D.coefficient(NodePoint(n)) for n in range(6)] == [2, -1, -4, 4, -1, 0]
    assert D.positive_part().degree == 6 and D.negative_part().degree == 6


def test_ray_end_carries_slope():
    G = MetricGraph(((F(0), F(0)),), (Arc(0, None, None, (1, 0)),), frozenset({0}), frozenset({0}))
    h = PLFunc.from_slopes(G, [0], [((F(2),), (0, 1))])
    assert divisor_of(h) == Divisor({(F(2), F(0)): -1, RayEnd.of_ray((0, 0), (1, 0)): 1})


def test_plfunc_validation():
    with pytest.raises(ValueError):
        PLFunc.from_slopes(path([1]), [0, 1], [((), (2,))])
    with pytest.raises(ValueError):
        PLFunc.from_slopes(path([1]), [0, 0], [((F(1, 2),), (1,))])


# --- find_certificate ---

def test_plateau_certificate():
    G, E = fixture_setting("line_conic")
    D = Divisor.from_points([(F(1, 4), 0), (F(3, 4), 0)])
    h = find_certificate(G, D, E)
    seg = next(iter(G.marked_arcs))
    assert h.pieces[seg] == ((F(1, 4), F(3, 4)), (1, 0, -1))
    assert certificate_is_sound(h, D, E)


def test_identity_certificate():
    G, E = fixture_setting("line_conic")
    assert find_certificate(G, E, E).is_zero()


def test_unbalanced_pair_has_no_certificate():
    G, E = fixture_setting("line_conic")
    D = Divisor.from_points([(F(1, 4), 0), (F(1, 2), 0)])
    assert find_certificate(G, D, E) is None
    assert find_certificate(G, D, E, bound=8) is None


def test_support_outside_s():
    G, E = fixture_setting("line_conic")
    with pytest.raises(SupportOutsideS):
        find_certificate(G, Divisor.from_points([(0, 3), (1, 0)]), E)


def test_cycle_certificate():
    # a triangle of unit arcs, all marked, no attachments
    arcs = (Arc(0, 1, F(1)), Arc(1, 2, F(1)), Arc(2, 0, F(1)))
    G = MetricGraph((None,) * 3, arcs, frozenset(range(3)), frozenset(range(3)))
    D = Divisor({ArcPoint(0, F(1, 2)): 1, ArcPoint(1, F(1, 2)): 1})
    E = Divisor({NodePoint(1): 2})
    h = find_certificate(G, D, E)
    assert h is not None and certificate_is_sound(h, D, E)
    # on a cycle of length 3 one point cannot move to another
    assert find_certificate(G, Divisor({ArcPoint(0, F(1, 2)): 1}), Divisor({NodePoint(1): 1})) is None


# --- configuration space ---

def test_segment_configuration_space():
    G, E = fixture_setting("line_conic")
    (cell,) = configuration_space(G, E)
    assert cell.dimension == 1
    assert sorted(cell.vertex_configurations(), key=len) == [
        Divisor({(F(1, 2), F(0)): 2}), Divisor.from_points([(0, 0), (1, 0)])]
    r = cell.sample()[0]
    assert cell.configuration(cell.sample()) == Divisor.from_points([(r, 0), (1 - r, 0)])
    assert 0 < r < F(1, 2)


def test_star_configuration_space():
    G, E = fixture_setting("conic_conic")
    cells = configuration_space(G, E)
    assert len(cells) == 3
    assert all(c.dimension == 2 for c in cells)


def test_single_point_configuration_space():
    G, E = fixture_setting("transversal_lines")
    (cell,) = configuration_space(G, E)
    assert cell.dimension == 0
    assert cell.configuration(()) == E


def test_cyclic_configuration_space_refused():
    G, E = fixture_setting("cubic_cubic")
    with pytest.raises(CyclicSubcomplexUnsupported):
        configuration_space(G, E)


def test_faces_of_segment_cell():
    G, E = fixture_setting("line_conic")
    (top,) = configuration_space(G, E)
    cells = all_cells(top.graph, E)
    # sliding both zeros to the ends gives E; the doubled midpoint stays inside
    # the arc, so it is a polytope vertex of the same cell rather than a face
    (face,) = faces_of(top, cells)
    assert face.dimension == 0 and face.configuration(()) == E


# --- properties ---

def test_degree_zero_on_random_functions():
    rng = random.Random(11)
    for _ in range(100):
        h = random_plfunc(rng, cyclic=True)
        D = divisor_of(h)
        assert D.degree == 0
        for n in range(len(h.graph.nodes)):
            assert D.coefficient(NodePoint(n)) == -sum(
                h.pieces[k][1][0] if sign > 0 else -h.pieces[k][1][-1] for k, sign in h.graph.incident(n))
        assert all(isinstance(p, (NodePoint, ArcPoint, ArcEnd)) for p in D)


def tree_function(rng: random.Random, g: MetricGraph) -> PLFunc:
    """Random function on a graph whose finite arcs form a forest, arcs oriented away from roots."""
    values = [None] * len(g.nodes)
    pieces = [None] * len(g.arcs)
    for n in range(len(g.nodes)):
        if values[n] is None:
            values[n] = F(rng.randint(-3, 3))
    for k, a in enumerate(g.arcs):
        length = a.length if a.length is not None else F(3)
        cut = length / 2
        s0, s1 = rng.randint(-2, 2), rng.randint(-2, 2)
        pieces[k] = ([cut], [s0, s1])
        if a.head is not None:
            values[a.head] = values[a.tail] + s0 * cut + s1 * (length - cut)
    return PLFunc.from_slopes(g, values, pieces)


def random_tree(rng: random.Random) -> MetricGraph:
    n = rng.randint(2, 5)
    arcs = [Arc(rng.randrange(k), k, F(rng.randint(1, 4), rng.randint(1, 3))) for k in range(1, n)]
    arcs += [Arc(rng.randrange(n), None, None) for _ in range(rng.randint(0, 2))]
    return MetricGraph((None,) * n, tuple(arcs))


def test_linearity():
    rng = random.Random(5)
    for _ in range(60):
        g = random_tree(rng)
        h1, h2 = tree_function(rng, g), tree_function(rng, g)
        c = F(rng.randint(-5, 5), 3)
        assert divisor_of(h1 + h2) == divisor_of(h1) + divisor_of(h2)
        assert divisor_of(h1 - h2) == divisor_of(h1) - divisor_of(h2)
        assert divisor_of(-h1) == -divisor_of(h1)
        assert divisor_of(h1 + c) == divisor_of(h1)


def _witness_cases():
    """(graph, D, E) triples: certified configurations and perturbed ones."""
    out = []
    for name in ("line_conic", "conic_conic", "transversal_lines"):
        G, E = fixture_setting(name)
        for cell in configuration_space(G, E):
            out.append((cell.graph, cell.configuration(cell.sample()), E))
            out.extend((cell.graph, D, E) for D in cell.vertex_configurations())
    G, E = fixture_setting("line_conic")
    for a in range(0, 9):
        for b in range(a, 9):
            out.append((G, Divisor.from_points([(F(a, 8), 0), (F(b, 8), 0)]), E))
    return out


def test_soundness_and_completeness_at_bound():
    found = missing = 0
    for G, D, E in _witness_cases():
        h = find_certificate(G, D, E)
        if h is None:
            missing += 1
            bound = D.positive_part().degree + E.positive_part().degree
            assert find_certificate(G, D, E, bound=bound + 3) is None
        else:
            found += 1
            assert certificate_is_sound(h, D, E)
    assert found and missing


@pytest.mark.parametrize("name", ["line_conic", "conic_conic", "transversal_lines"])
def test_config_samples_certify_with_cell_slopes(name):
    G, E = fixture_setting(name)
    for cell in configuration_space(G, E):
        D = cell.configuration(cell.sample())
        h = find_certificate(cell.graph, D, E)
        assert h is not None and certificate_is_sound(h, D, E)
        for k, slopes in cell.slopes:
            assert h.pieces[k][1] == slopes
