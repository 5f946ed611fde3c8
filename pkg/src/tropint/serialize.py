"""JSON persistence for every artifact the command line produces.

Every document is an object with a ``type`` discriminator and a
``schema_version``. Rationals are strings ``"p/q"`` (or ``"p"``) so that
nothing passes through floating point.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Callable, Dict, List

from tropint.divisor_calculus import Arc, ConfigCell, MetricGraph, PLFunc
from tropint.divisors import ArcEnd, ArcPoint, Divisor, NodePoint, RayEnd
from tropint.lifting import AmbiguousPairing, LiftReport
from tropint.polyhedron import Polyhedron
from tropint.polyparse import format_poly, parse_poly
from tropint.puiseux import BivariatePoly
from tropint.stable_intersection import IntersectionComplex
from tropint.tropical_curve import DualCell, DualSubdivision, Ray, Segment, TropCurve

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """A JSON document does not match the expected layout."""


def rat(x) -> str:
    return str(Fraction(x))


def unrat(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise SchemaError(f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {s!r}") from exc


def _pt(p) -> List[str]:
    return [rat(p[0]), rat(p[1])]


def _unpt(v):
    return (unrat(v[0]), unrat(v[1]))


def _lat(v) -> tuple:
    return (int(v[0]), int(v[1]))


# --- encoders (bodies without the envelope) ----------------------------------


def _curve(C: TropCurve) -> Dict[str, Any]:
    return {
        "vertices": [_pt(v) for v in C.vertices],
        "segments": [{"start": s.start, "end": s.end, "weight": s.weight,
                      "direction": list(s.direction), "dual": [list(d) for d in s.dual]} for s in C.segments],
        "rays": [{"base": r.base, "direction": list(r.direction), "weight": r.weight,
                  "dual": [list(d) for d in r.dual]} for r in C.rays],
        "dual": {
            "cells": [{"vertices": [list(v) for v in c.vertices], "points": [list(p) for p in c.points],
                       "normal": _pt(c.normal)} for c in C.dual.cells],
            "edges": [[list(a), list(b)] for a, b in C.dual.edges],
        },
    }


def _uncurve(d) -> TropCurve:
    dual = d.get("dual", {"cells": [], "edges": []})
    return TropCurve(
        tuple(_unpt(v) for v in d["vertices"]),
        tuple(Segment(s["start"], s["end"], s["weight"], _lat(s["direction"]),
                      tuple(_lat(x) for x in s["dual"])) for s in d["segments"]),
        tuple(Ray(r["base"], _lat(r["direction"]), r["weight"], tuple(_lat(x) for x in r["dual"]))
              for r in d["rays"]),
        DualSubdivision(
            tuple(DualCell(tuple(_lat(v) for v in c["vertices"]), tuple(_lat(p) for p in c["points"]),
                           _unpt(c["normal"])) for c in dual["cells"]),
            tuple((_lat(a), _lat(b)) for a, b in dual["edges"]),
        ),
    )


def _point(p) -> Dict[str, Any]:
    if isinstance(p, tuple):
        return {"kind": "point", "at": _pt(p)}
    if isinstance(p, RayEnd):
        return {"kind": "ray_end", "direction": list(p.direction), "offset": rat(p.offset)}
    if isinstance(p, NodePoint):
        return {"kind": "node", "node": p.node}
    if isinstance(p, ArcPoint):
        return {"kind": "arc", "arc": p.arc, "pos": rat(p.pos)}
    if isinstance(p, ArcEnd):
        return {"kind": "arc_end", "arc": p.arc}
    raise SchemaError(f"cannot serialize point {p!r}")


def _unpoint(d):
    kind = d.get("kind")
    if kind == "point":
        return _unpt(d["at"])
    if kind == "ray_end":
        return RayEnd(_lat(d["direction"]), unrat(d["offset"]))
    if kind == "node":
        return NodePoint(int(d["node"]))
    if kind == "arc":
        return ArcPoint(int(d["arc"]), unrat(d["pos"]))
    if kind == "arc_end":
        return ArcEnd(int(d["arc"]))
    raise SchemaError(f"unknown point kind {kind!r}")


def _divisor(D: Divisor) -> Dict[str, Any]:
    return {"terms": [{"point": _point(p), "coeff": k} for p, k in D.items()]}


def _undivisor(d) -> Divisor:
    return Divisor((_unpoint(t["point"]), int(t["coeff"])) for t in d["terms"])


def _complex(I: IntersectionComplex) -> Dict[str, Any]:
    return {
        "points": [_pt(p) for p in I.points],
        "segments": [list(s) for s in I.segments],
        "rays": [{"base": a, "direction": list(u)} for a, u in I.rays],
        "attachments": [{"point": k, "directions": [list(u) for u in dirs]}
                        for k, dirs in sorted(I.attachments.items())],
    }


def _uncomplex(d) -> IntersectionComplex:
    return IntersectionComplex(
        tuple(_unpt(p) for p in d["points"]),
        tuple((int(a), int(b)) for a, b in d["segments"]),
        tuple((int(r["base"]), _lat(r["direction"])) for r in d["rays"]),
        {int(a["point"]): tuple(_lat(u) for u in a["directions"]) for a in d["attachments"]},
    )


def _graph(g: MetricGraph) -> Dict[str, Any]:
    return {
        "nodes": [None if p is None else _pt(p) for p in g.nodes],
        "arcs": [{"tail": a.tail, "head": a.head, "length": None if a.length is None else rat(a.length),
                  "direction": None if a.direction is None else list(a.direction)} for a in g.arcs],
        "marked_arcs": sorted(g.marked_arcs),
        "marked_nodes": sorted(g.marked_nodes),
    }


def _ungraph(d) -> MetricGraph:
    return MetricGraph(
        tuple(None if p is None else _unpt(p) for p in d["nodes"]),
        tuple(Arc(int(a["tail"]), None if a["head"] is None else int(a["head"]),
                  None if a["length"] is None else unrat(a["length"]),
                  None if a["direction"] is None else _lat(a["direction"])) for a in d["arcs"]),
        frozenset(int(k) for k in d["marked_arcs"]),
        frozenset(int(n) for n in d["marked_nodes"]),
    )


def _plfunc(h: PLFunc) -> Dict[str, Any]:
    return {
        "graph": _graph(h.graph),
        "node_values": [rat(v) for v in h.node_values],
        "pieces": [{"breakpoints": [rat(b) for b in bps], "slopes": list(sl)} for bps, sl in h.pieces],
    }


def _unplfunc(d) -> PLFunc:
    return PLFunc.from_slopes(_ungraph(d["graph"]), [unrat(v) for v in d["node_values"]],
                              [([unrat(b) for b in p["breakpoints"]], p["slopes"]) for p in d["pieces"]])


def _polytope(P: Polyhedron) -> Dict[str, Any]:
    return {
        "nvars": P.nvars,
        "equalities": [{"lhs": [rat(c) for c in a], "rhs": rat(b)} for a, b in zip(P.eq_lhs, P.eq_rhs)],
        "inequalities": [{"lhs": [rat(c) for c in a], "rhs": rat(b)} for a, b in zip(P.ineq_lhs, P.ineq_rhs)],
    }


def _unpolytope(d) -> Polyhedron:
    return Polyhedron.build(
        int(d["nvars"]),
        [([unrat(c) for c in e["lhs"]], unrat(e["rhs"])) for e in d["equalities"]],
        [([unrat(c) for c in e["lhs"]], unrat(e["rhs"])) for e in d["inequalities"]],
    )


def _cell(c: ConfigCell) -> Dict[str, Any]:
    return {
        "poles": _divisor(c.poles),
        "node_zeros": [list(x) for x in c.node_zeros],
        "arc_zeros": [list(x) for x in c.arc_zeros],
        "variables": [list(v) for v in c.variables],
        "slopes": [{"arc": k, "slopes": list(s)} for k, s in c.slopes],
        "polytope": _polytope(c.polytope),
        "dimension": c.dimension,
        "sample": [rat(x) for x in c.sample()],
        "vertex_configurations": [_divisor(D) for D in c.vertex_configurations()],
    }


def _uncell(d, graph: MetricGraph) -> ConfigCell:
    return ConfigCell(
        graph, _undivisor(d["poles"]),
        tuple((int(a), int(b)) for a, b in d["node_zeros"]),
        tuple((int(a), int(b)) for a, b in d["arc_zeros"]),
        tuple((int(a), int(b)) for a, b in d["variables"]),
        tuple((int(s["arc"]), tuple(int(x) for x in s["slopes"])) for s in d["slopes"]),
        _unpolytope(d["polytope"]), int(d["dimension"]),
    )


def _lift(R: LiftReport) -> Dict[str, Any]:
    amb = None
    if R.ambiguity is not None:
        amb = {"candidates": [_divisor(D) for D in R.ambiguity.candidates],
               "survivors": [_divisor(D) for D in R.ambiguity.survivors]}
    return {
        "C1": _curve(R.C1),
        "C2": _curve(R.C2),
        "I": _complex(R.I),
        "graph": _graph(R.graph),
        "E": _divisor(R.E),
        "D": None if R.D is None else _divisor(R.D),
        "certificate": None if R.certificate is None else _plfunc(R.certificate),
        "xvals": [rat(v) for v in R.xvals],
        "yvals": [rat(v) for v in R.yvals],
        "zero_roots": list(R.dropped),
        "outside_torus": R.outside_torus,
        "matchings": R.matchings,
        "ambiguity": amb,
        "mixed_volume": R.mixed_volume,
        "falsified": R.falsified,
    }


def _unlift(d) -> LiftReport:
    amb = None
    if d["ambiguity"] is not None:
        amb = AmbiguousPairing(tuple(_undivisor(x) for x in d["ambiguity"]["candidates"]),
                               tuple(_undivisor(x) for x in d["ambiguity"]["survivors"]))
    return LiftReport(
        _uncurve(d["C1"]), _uncurve(d["C2"]), _uncomplex(d["I"]), _ungraph(d["graph"]),
        _undivisor(d["E"]), None if d["D"] is None else _undivisor(d["D"]),
        None if d["certificate"] is None else _unplfunc(d["certificate"]),
        tuple(unrat(v) for v in d["xvals"]), tuple(unrat(v) for v in d["yvals"]),
        tuple(int(k) for k in d["zero_roots"]), int(d["matchings"]), amb,
        int(d["mixed_volume"]), bool(d["falsified"]),
    )


def _cells(cells) -> Dict[str, Any]:
    cells = list(cells)
    graph = cells[0].graph if cells else None
    return {"graph": None if graph is None else _graph(graph), "cells": [_cell(c) for c in cells]}


def _uncells(d) -> List[ConfigCell]:
    if d["graph"] is None:
        return []
    g = _ungraph(d["graph"])
    return [_uncell(c, g) for c in d["cells"]]


def _poly(f: BivariatePoly) -> Dict[str, Any]:
    return {"text": format_poly(f)}


def _unpoly(d) -> BivariatePoly:
    return parse_poly(d["text"])


ENCODERS: Dict[str, Callable] = {
    "trop_curve": _curve,
    "divisor": _divisor,
    "pl_func": _plfunc,
    "intersection_complex": _complex,
    "metric_graph": _graph,
    "lift_report": _lift,
    "config_cells": _cells,
    "polynomial": _poly,
}
DECODERS: Dict[str, Callable] = {
    "trop_curve": _uncurve,
    "divisor": _undivisor,
    "pl_func": _unplfunc,
    "intersection_complex": _uncomplex,
    "metric_graph": _ungraph,
    "lift_report": _unlift,
    "config_cells": _uncells,
    "polynomial": _unpoly,
}


def kind_of(obj) -> str:
    if isinstance(obj, TropCurve):
        return "trop_curve"
    if isinstance(obj, Divisor):
        return "divisor"
    if isinstance(obj, PLFunc):
        return "pl_func"
    if isinstance(obj, IntersectionComplex):
        return "intersection_complex"
    if isinstance(obj, MetricGraph):
        return "metric_graph"
    if isinstance(obj, LiftReport):
        return "lift_report"
    if isinstance(obj, BivariatePoly):
        return "polynomial"
    if isinstance(obj, (list, tuple)) and all(isinstance(c, ConfigCell) for c in obj):
        return "config_cells"
    raise SchemaError(f"no JSON schema for {type(obj).__name__}")


def to_json(obj) -> Dict[str, Any]:
    kind = kind_of(obj)
    return {"type": kind, "schema_version": SCHEMA_VERSION, **ENCODERS[kind](obj)}


def from_json(doc: Dict[str, Any]):
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError("document has no 'type' field")
    kind = doc["type"]
    if kind not in DECODERS:
        raise SchemaError(f"unknown document type {kind!r}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
    try:
        return DECODERS[kind](doc)
    except (KeyError, TypeError, IndexError) as exc:
        raise SchemaError(f"malformed {kind} document: {exc}") from exc


def dumps(obj) -> str:
    return json.dumps(to_json(obj), indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return from_json(doc)


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
