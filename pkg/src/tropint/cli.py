"""Command-line interface.

Exit codes: 0 on success, 1 on parse or validation errors, 2 when a
certificate that should exist is missing.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import List, Optional, Sequence

from tropint.divisor_calculus import (
    CellNotOnCurve, CyclicSubcomplexUnsupported, SupportOutsideS, configuration_space,
    find_certificate, graph_of_curve)
from tropint.divisors import Divisor
from tropint.fixtures import STRESS_FAMILIES, perturb
from tropint.lifting import NoAdmissiblePairing, verify_main_theorem
from tropint.polyparse import ParseError, parse_poly
from tropint.puiseux import IdenticallyZeroResultant
from tropint.serialize import SCHEMA_VERSION, SchemaError, dumps, loads, write_atomic
from tropint.stable_intersection import (
    GenericityFailure, IntersectionComplex, intersect_complex, stable_divisor)
from tropint.svg import render_svg
from tropint.tropical_curve import EmptyCurve, TropCurve, curve_of, tropicalize_poly

EXIT_OK, EXIT_INPUT, EXIT_FALSIFIED = 0, 1, 2

USER_ERRORS = (ParseError, SchemaError, SupportOutsideS, CellNotOnCurve, CyclicSubcomplexUnsupported,
               EmptyCurve, IdenticallyZeroResultant, GenericityFailure, NoAdmissiblePairing, OSError, ValueError)


class UsageError(ValueError):
    pass


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _poly(args, which: str):
    src = getattr(args, which)
    if src is None:
        raise UsageError(f"-{which} is required")
    return parse_poly(src if args.inline else _read(src))


def _load(path: str, kind):
    obj = loads(_read(path))
    if not isinstance(obj, kind):
        raise SchemaError(f"{path}: expected {kind.__name__}, found {type(obj).__name__}")
    return obj


def _emit(args, obj) -> None:
    want_svg = args.svg
    want_json = args.json or not want_svg
    outputs = []
    if want_json:
        outputs.append((".json", dumps(obj)))
    if want_svg:
        outputs.append((".svg", render_svg(obj, args.ray_len)))
    if args.out is None:
        for _, text in outputs:
            sys.stdout.write(text)
        return
    for suffix, text in outputs:
        path = args.out
        if len(outputs) > 1:
            path = os.path.splitext(path)[0] + suffix
        write_atomic(path, text)


def _setting(args):
    """Curve, intersection complex and default poles from polys or JSON files."""
    if args.f is not None:
        if args.g is None:
            raise UsageError("-g is required together with -f")
        C1 = curve_of(tropicalize_poly(_poly(args, "f")))
        C2 = curve_of(tropicalize_poly(_poly(args, "g")))
        return C1, intersect_complex(C1, C2), stable_divisor(C1, C2)
    if args.curve is None:
        raise UsageError("give -f/-g or --curve with --complex or --with")
    C1 = _load(args.curve, TropCurve)
    if args.other is not None:
        C2 = _load(args.other, TropCurve)
        return C1, intersect_complex(C1, C2), stable_divisor(C1, C2)
    if args.complex is None:
        raise UsageError("--curve needs --complex or --with")
    return C1, _load(args.complex, IntersectionComplex), None


def _poles(args, default):
    if args.poles is not None:
        return _load(args.poles, Divisor)
    if default is None:
        raise UsageError("-E is required when the second curve is not known")
    return default


def cmd_tropicalize(args) -> int:
    _emit(args, curve_of(tropicalize_poly(_poly(args, "f"))))
    return EXIT_OK


def cmd_intersect(args) -> int:
    C1 = curve_of(tropicalize_poly(_poly(args, "f")))
    C2 = curve_of(tropicalize_poly(_poly(args, "g")))
    _emit(args, intersect_complex(C1, C2))
    return EXIT_OK


def cmd_stable(args) -> int:
    C1 = curve_of(tropicalize_poly(_poly(args, "f")))
    C2 = curve_of(tropicalize_poly(_poly(args, "g")))
    _emit(args, stable_divisor(C1, C2))
    return EXIT_OK


def cmd_lift(args) -> int:
    report = verify_main_theorem(_poly(args, "f"), _poly(args, "g"))
    _emit(args, report)
    if report.falsified:
        print("falsification: no certificate for the tropicalized intersection", file=sys.stderr)
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_certify(args) -> int:
    C1, I, E0 = _setting(args)
    if args.zeros is None:
        raise UsageError("-D is required")
    D = _load(args.zeros, Divisor)
    E = _poles(args, E0)
    graph = graph_of_curve(C1, I)
    h = find_certificate(graph, D, E, args.bound)
    if h is None:
        if args.out is not None:
            write_atomic(args.out, "none\n")
        else:
            print("none")
        return EXIT_FALSIFIED
    _emit(args, h)
    return EXIT_OK


def cmd_configspace(args) -> int:
    C1, I, E0 = _setting(args)
    E = _poles(args, E0)
    _emit(args, configuration_space(graph_of_curve(C1, I), E))
    return EXIT_OK


def cmd_plot(args) -> int:
    if args.input is None:
        raise UsageError("--in is required")
    obj = loads(_read(args.input))
    text = render_svg(obj, args.ray_len)
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_atomic(args.out, text)
    return EXIT_OK


def run_stress(seed: int, count: int, families: Optional[Sequence[str]] = None) -> dict:
    rng = random.Random(seed)
    rows = []
    for name in families or sorted(STRESS_FAMILIES):
        make = STRESS_FAMILIES[name]
        row = {"family": name, "runs": 0, "certified": 0, "ambiguous": 0, "falsified": 0, "d_equals_e": 0}
        for _ in range(count):
            f, g = make()
            report = verify_main_theorem(perturb(f, rng), perturb(g, rng))
            row["runs"] += 1
            row["certified"] += report.certificate is not None
            row["ambiguous"] += report.ambiguity is not None
            row["falsified"] += report.falsified
            row["d_equals_e"] += report.D == report.E
        rows.append(row)
    return {"type": "stress_summary", "schema_version": SCHEMA_VERSION, "seed": seed, "families": rows}


def cmd_stress(args) -> int:
    summary = run_stress(args.seed, args.count)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        write_atomic(args.out, text)
    return EXIT_FALSIFIED if any(r["falsified"] for r in summary["families"]) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropint", description="Tropical intersections and their lifts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, polys: str = ""):
        if "f" in polys:
            p.add_argument("-f", help="polynomial file (or the polynomial itself with --inline)")
        if "g" in polys:
            p.add_argument("-g", help="second polynomial file (or text with --inline)")
        if polys:
            p.add_argument("--inline", action="store_true", help="read -f/-g as polynomial text")
        p.add_argument("--out", help="output path (default: standard output)")
        p.add_argument("--json", action="store_true", help="emit JSON (the default)")
        p.add_argument("--svg", action="store_true", help="emit SVG")
        p.add_argument("--ray-len", type=int, default=2, help="drawn length of rays in lattice units")

    def graph_source(p):
        common(p, "fg")
        p.add_argument("--curve", help="trop_curve JSON of the curve carrying the divisors")
        p.add_argument("--complex", help="intersection_complex JSON")
        p.add_argument("--with", dest="other", help="trop_curve JSON of the second curve")
        p.add_argument("-E", dest="poles", help="divisor JSON of the poles (default: stable intersection)")

    common(sub.add_parser("tropicalize", help="polynomial -> tropical curve"), "f")
    common(sub.add_parser("intersect", help="two polynomials -> intersection complex"), "fg")
    common(sub.add_parser("stable", help="two polynomials -> stable intersection divisor"), "fg")
    common(sub.add_parser("lift", help="two polynomials -> lift report"), "fg")
    p = sub.add_parser("certify", help="find a function with divisor D - E")
    graph_source(p)
    p.add_argument("-D", dest="zeros", help="divisor JSON of the zeros")
    p.add_argument("--bound", type=int, default=None, help="slope search bound")
    graph_source(sub.add_parser("configspace", help="maximal cells of certified zero configurations"))
    p = sub.add_parser("plot", help="any JSON artifact -> SVG")
    p.add_argument("--in", dest="input", help="JSON artifact")
    p.add_argument("--out", help="SVG path (default: standard output)")
    p.add_argument("--ray-len", type=int, default=2)
    p = sub.add_parser("stress", help="randomized check over perturbed fixture families")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--out")
    return parser


COMMANDS = {
    "tropicalize": cmd_tropicalize,
    "intersect": cmd_intersect,
    "stable": cmd_stable,
    "lift": cmd_lift,
    "certify": cmd_certify,
    "configspace": cmd_configspace,
    "plot": cmd_plot,
    "stress": cmd_stress,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
