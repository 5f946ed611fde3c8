"""Exact computations around intersections of tropical plane curves.

Polynomials over Puiseux series are tropicalized, their curves intersected
both set-theoretically and stably, and the divisor of the tropicalized
classical intersection is compared with the stable one through an explicit
piecewise-linear function on the first curve.
"""

from tropint.divisor_calculus import (
    CellNotOnCurve, ConfigCell, CyclicSubcomplexUnsupported, MetricGraph, PLFunc, SupportOutsideS,
    certificate_is_sound, configuration_space, divisor_of, find_certificate, graph_of_curve)
from tropint.divisors import Divisor, RayEnd
from tropint.lifting import (
    AmbiguousPairing, LiftReport, NoAdmissiblePairing, assemble_divisor, intersection_valuations,
    verify_main_theorem)
from tropint.polyparse import ParseError, format_poly, parse_poly
from tropint.puiseux import (
    BivariatePoly, IdenticallyZeroResultant, PuiseuxScalar, UniPoly, newton_root_valuations, ps_arith, ps_val,
    resultant_wrt)
from tropint.stable_intersection import (
    GenericityFailure, IntersectionComplex, NewtonPolygon, intersect_complex, mixed_volume, stable_divisor)
from tropint.tropical_curve import (
    TropCurve, TropPoly, check_balanced, curve_of, dual_subdivision, is_smooth, trop_eval, tropicalize_poly)

__all__ = [
    "AmbiguousPairing", "BivariatePoly", "CellNotOnCurve", "ConfigCell", "CyclicSubcomplexUnsupported",
    "Divisor", "GenericityFailure", "IdenticallyZeroResultant", "IntersectionComplex", "LiftReport",
    "MetricGraph", "NewtonPolygon", "NoAdmissiblePairing", "PLFunc", "ParseError", "PuiseuxScalar", "RayEnd",
    "SupportOutsideS", "TropCurve", "TropPoly", "UniPoly", "assemble_divisor", "certificate_is_sound",
    "check_balanced", "configuration_space", "curve_of", "divisor_of", "dual_subdivision", "find_certificate",
    "format_poly", "graph_of_curve", "intersect_complex", "intersection_valuations", "is_smooth",
    "mixed_volume", "newton_root_valuations", "parse_poly", "ps_arith", "ps_val", "resultant_wrt",
    "stable_divisor", "trop_eval", "tropicalize_poly", "verify_main_theorem",
]
