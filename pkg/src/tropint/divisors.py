"""Divisors: finitely supported integer functions on points of a curve."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Iterator, Mapping, Tuple

from tropint.tropical_curve import Direction, cross


@dataclass(frozen=True, order=True)
class RayEnd:
    """The point at infinity of an unbounded ray.

    Rays on the same line with the same direction share their end, so the
    end is keyed by the direction and the line offset ``cross(direction, p)``.
    """

    direction: Direction
    offset: Fraction

    @classmethod
    def of_ray(cls, base, direction) -> "RayEnd":
        return cls(tuple(direction), Fraction(cross(direction, base)))

    def __str__(self) -> str:
        return f"end{self.direction}@{self.offset}"


@dataclass(frozen=True, order=True)
class NodePoint:
    """A node of an abstract (non-embedded) metric graph."""

    node: int


@dataclass(frozen=True, order=True)
class ArcPoint:
    """A point at lattice distance ``pos`` from the tail of an abstract arc."""

    arc: int
    pos: Fraction


@dataclass(frozen=True, order=True)
class ArcEnd:
    """The infinite end of an abstract ray arc."""

    arc: int


def point_key(p) -> tuple:
    """Total order over the mixed point types, for deterministic output."""
    if isinstance(p, tuple):
        return (0, p)
    if isinstance(p, RayEnd):
        return (1, (p.direction, p.offset))
    if isinstance(p, NodePoint):
        return (2, (p.node,))
    if isinstance(p, ArcPoint):
        return (3, (p.arc, p.pos))
    if isinstance(p, ArcEnd):
        return (4, (p.arc,))
    raise TypeError(f"not a divisor point: {p!r}")


class Divisor(Mapping):
    """Immutable formal integer sum of points; zero coefficients are dropped."""

    __slots__ = ("_data",)

    def __init__(self, items: Mapping | Iterable[Tuple[Hashable, int]] | None = None):
        acc: Dict[Hashable, int] = {}
        if items is not None:
            pairs = items.items() if isinstance(items, Mapping) else items
            for p, k in pairs:
                if isinstance(p, list):
                    p = tuple(p)
                if isinstance(p, tuple):
                    p = (Fraction(p[0]), Fraction(p[1]))
                acc[p] = acc.get(p, 0) + int(k)
        self._data = {p: acc[p] for p in sorted(acc, key=point_key) if acc[p]}

    @classmethod
    def from_points(cls, points: Iterable) -> "Divisor":
        return cls((p, 1) for p in points)

    def __getitem__(self, p) -> int:
        return self._data[p]

    def __iter__(self) -> Iterator:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def coefficient(self, p) -> int:
        return self._data.get(p, 0)

    @property
    def degree(self) -> int:
        return sum(self._data.values())

    @property
    def support(self) -> list:
        return list(self._data)

    def is_effective(self) -> bool:
        return all(k > 0 for k in self._data.values())

    def positive_part(self) -> "Divisor":
        return Divisor((p, k) for p, k in self._data.items() if k > 0)

    def negative_part(self) -> "Divisor":
        return Divisor((p, -k) for p, k in self._data.items() if k < 0)

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._data.items()) + list(other.items()))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._data.items()) + [(p, -k) for p, k in other.items()])

    def __neg__(self) -> "Divisor":
        return Divisor((p, -k) for p, k in self._data.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, Divisor):
            return self._data == other._data
        if isinstance(other, Mapping):
            return self == Divisor(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._data.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{_fmt_point(p)}: {k}" for p, k in self._data.items())
        return f"Divisor({{{inner}}})"


def _fmt_point(p) -> str:
    if isinstance(p, tuple):
        return f"({p[0]}, {p[1]})"
    return str(p)
