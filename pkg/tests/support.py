"""Independent oracles and generators shared by the test modules."""

import random
from fractions import Fraction as F

from tropint.divisor_calculus import Arc, MetricGraph, PLFunc


# mixed volume from Pick's theorem on brute-force lattice point counts

def _orient(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out[:-1]

    return chain(pts) + chain(reversed(pts))


def _twice_area_by_pick(points):
    hull = _hull(points)
    if len(hull) < 3:
        return 0
    xs, ys = [p[0] for p in hull], [p[1] for p in hull]
    interior = boundary = 0
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            signs = [_orient(hull[k], hull[(k + 1) % len(hull)], (x, y)) for k in range(len(hull))]
            if any(s < 0 for s in signs):
                continue
            if all(s > 0 for s in signs):
                interior += 1
            else:
                boundary += 1
    return 2 * interior + boundary - 2


def mixed_volume_oracle(s1, s2):
    minkowski = [(a[0] + b[0], a[1] + b[1]) for a in s1 for b in s2]
    twice = _twice_area_by_pick(minkowski) - _twice_area_by_pick(s1) - _twice_area_by_pick(s2)
    assert twice % 2 == 0
    return twice // 2


def random_plfunc(rng: random.Random, cyclic: bool) -> PLFunc:
    """A random function together with a graph built to fit it.

    Arc lengths are derived from the function so continuity holds on cycles.
    """
    n = rng.randint(1, 5)
    values = [F(rng.randint(-4, 4), rng.choice([1, 2, 3])) for _ in range(n)]
    ends = [(k, rng.randrange(k)) for k in range(1, n)]
    if cyclic:
        ends += [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 2))]
        ends = [(a, b) for a, b in ends if a != b]
    arcs, pieces = [], []
    for a, b in ends:
        bps, slopes, pos, acc = [], [], F(0), F(0)
        for _ in range(rng.randint(0, 2)):
            s = rng.randint(-3, 3)
            step = F(rng.randint(1, 4), rng.choice([1, 2, 4]))
            if slopes:
                bps.append(pos)
            slopes.append(s)
            pos += step
            acc += s * step
        rest = values[b] - values[a] - acc
        s = rng.randint(1, 3) * (1 if rest > 0 else -1) if rest != 0 else 0
        last = rest / s if s else F(rng.randint(1, 3))
        if slopes:
            bps.append(pos)
        slopes.append(s)
        arcs.append(Arc(a, b, pos + last))
        pieces.append((bps, slopes))
    for _ in range(rng.randint(0, 2)):
        a = rng.randrange(n)
        arcs.append(Arc(a, None, None))
        k = rng.randint(0, 1)
        pieces.append(([F(rng.randint(1, 3))] * k, [rng.randint(-2, 2) for _ in range(k + 1)]))
    g = MetricGraph((None,) * n, tuple(arcs))
    return PLFunc.from_slopes(g, values, pieces)
