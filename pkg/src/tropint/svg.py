"""Deterministic SVG pictures of curves, intersections, divisors and functions.

A :class:`Scene` stores exact coordinates; scaling to pixels happens only in
:meth:`Scene.render`. Zeros of a divisor are drawn as filled dots and
poles as crosses. Rays are drawn as stubs of ``ray_len`` lattice units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from tropint.divisor_calculus import ConfigCell, MetricGraph, PLFunc, divisor_of
from tropint.divisors import Divisor, RayEnd
from tropint.lifting import LiftReport
from tropint.stable_intersection import IntersectionComplex
from tropint.tropical_curve import TropCurve

SCALE = 60
PAD = 30


@dataclass
class Scene:
    ray_len: Fraction = Fraction(2)
    lines: List[Tuple[tuple, tuple, str]] = field(default_factory=list)
    dots: List[Tuple[tuple, str]] = field(default_factory=list)
    crosses: List[Tuple[tuple, str]] = field(default_factory=list)
    labels: List[Tuple[tuple, str, str]] = field(default_factory=list)
    ray_tips: dict = field(default_factory=dict)

    def stub(self, base, direction) -> tuple:
        return (base[0] + self.ray_len * direction[0], base[1] + self.ray_len * direction[1])

    def add_curve(self, C: TropCurve, style: str = "curve") -> None:
        for e in C.edges():
            end = e.end if e.length is not None else self.stub(e.start, e.direction)
            self.lines.append((e.start, end, style))
            if e.weight > 1:
                mid = ((e.start[0] + end[0]) / 2, (e.start[1] + end[1]) / 2)
                self.labels.append((mid, str(e.weight), "weight"))
            if e.length is None:
                self.ray_tips[RayEnd.of_ray(e.start, e.direction)] = end

    def add_complex(self, I: IntersectionComplex) -> None:
        for e in I.edges():
            end = e.end if e.length is not None else self.stub(e.start, e.direction)
            self.lines.append((e.start, end, "complex"))
        for p in I.points:
            self.dots.append((p, "cell"))

    def where(self, p) -> Optional[tuple]:
        if isinstance(p, tuple):
            return p
        if isinstance(p, RayEnd):
            if p in self.ray_tips:
                return self.ray_tips[p]
            # foot of the line closest to the origin, pushed out along the ray
            u = p.direction
            n2 = u[0] * u[0] + u[1] * u[1]
            foot = (-Fraction(p.offset * u[1], n2), Fraction(p.offset * u[0], n2))
            return self.stub(foot, u)
        return None

    def add_divisor(self, D: Divisor) -> None:
        for p, k in D.items():
            q = self.where(p)
            if q is None:
                continue
            (self.dots if k > 0 else self.crosses).append((q, "zero" if k > 0 else "pole"))
            if abs(k) > 1:
                self.labels.append((q, str(abs(k)), "mult"))

    def add_graph(self, g: MetricGraph, style: str = "graph") -> None:
        if not g.embedded:
            return
        for k, a in enumerate(g.arcs):
            p = g.nodes[a.tail]
            end = g.nodes[a.head] if a.head is not None else self.stub(p, a.direction)
            self.lines.append((p, end, "complex" if k in g.marked_arcs else style))
            if a.is_ray:
                self.ray_tips[g.ray_end(k)] = end

    def add_plfunc(self, h: PLFunc) -> None:
        g = h.graph
        self.add_graph(g)
        if not g.embedded:
            return
        for k, (bps, slopes) in enumerate(h.pieces):
            if k not in g.marked_arcs:
                continue
            a = g.arcs[k]
            stops = [Fraction(0)] + list(bps) + [a.length if a.length is not None else self.ray_len]
            for s, x0, x1 in zip(slopes, stops, stops[1:]):
                self.labels.append((g.arc_point(k, (x0 + x1) / 2), f"{s:+d}", "slope"))
        for n in sorted(g.marked_nodes):
            self.labels.append((g.nodes[n], str(h.node_values[n]), "value"))
        self.add_divisor(divisor_of(h))

    def bounds(self):
        pts = [a for a, _, _ in self.lines] + [b for _, b, _ in self.lines]
        pts += [p for p, _ in self.dots] + [p for p, _ in self.crosses] + [p for p, _, _ in self.labels]
        if not pts:
            return Fraction(-1), Fraction(-1), Fraction(1), Fraction(1)
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        return min(xs), min(ys), max(xs), max(ys)

    def render(self) -> str:
        x0, y0, x1, y1 = self.bounds()
        w = float(x1 - x0) * SCALE + 2 * PAD
        h = float(y1 - y0) * SCALE + 2 * PAD

        def X(p):
            return f"{float(p[0] - x0) * SCALE + PAD:.3f}"

        def Y(p):
            return f"{float(y1 - p[1]) * SCALE + PAD:.3f}"

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
            f'viewBox="0 0 {w:.3f} {h:.3f}">',
            "<style>"
            ".curve{stroke:#000;stroke-width:2;fill:none}"
            ".other{stroke:#888;stroke-width:2;stroke-dasharray:6 4;fill:none}"
            ".graph{stroke:#bbb;stroke-width:1.5;fill:none}"
            ".complex{stroke:#1f5fbf;stroke-width:4;fill:none;stroke-opacity:0.6}"
            ".zero{fill:#c01010}.cell{fill:#1f5fbf}"
            ".pole{stroke:#000;stroke-width:2.5}"
            "text{font-family:sans-serif;font-size:11px}"
            "</style>",
        ]
        for a, b, style in self.lines:
            out.append(f'<line class="{style}" x1="{X(a)}" y1="{Y(a)}" x2="{X(b)}" y2="{Y(b)}"/>')
        for p, style in self.dots:
            r = 3 if style == "cell" else 5
            out.append(f'<circle class="{style}" cx="{X(p)}" cy="{Y(p)}" r="{r}"/>')
        for p, _ in self.crosses:
            cx, cy = float(X(p)), float(Y(p))
            out.append(f'<path class="pole" d="M{cx - 6:.3f} {cy - 6:.3f}L{cx + 6:.3f} {cy + 6:.3f}'
                       f'M{cx - 6:.3f} {cy + 6:.3f}L{cx + 6:.3f} {cy - 6:.3f}"/>')
        for p, text, style in self.labels:
            out.append(f'<text class="{style}" x="{float(X(p)) + 6:.3f}" y="{float(Y(p)) - 6:.3f}">{text}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def scene_of(obj, ray_len=2) -> Scene:
    """Build the picture for any JSON-serializable artifact."""
    s = Scene(Fraction(ray_len))
    if isinstance(obj, TropCurve):
        s.add_curve(obj)
    elif isinstance(obj, IntersectionComplex):
        s.add_complex(obj)
    elif isinstance(obj, Divisor):
        s.add_divisor(obj)
    elif isinstance(obj, PLFunc):
        s.add_plfunc(obj)
    elif isinstance(obj, MetricGraph):
        s.add_graph(obj)
    elif isinstance(obj, LiftReport):
        s.add_curve(obj.C1)
        s.add_curve(obj.C2, "other")
        s.add_complex(obj.I)
        s.add_divisor(-obj.E)
        if obj.D is not None:
            s.add_divisor(obj.D)
    elif isinstance(obj, (list, tuple)) and all(isinstance(c, ConfigCell) for c in obj):
        if obj:
            s.add_graph(obj[0].graph)
            s.add_divisor(-obj[0].poles)
            for c in obj:
                s.add_divisor(c.configuration(c.sample()))
    else:
        raise TypeError(f"cannot draw {type(obj).__name__}")
    return s


def render_svg(obj, ray_len=2) -> str:
    return scene_of(obj, ray_len).render()
