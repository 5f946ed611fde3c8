"""Exact H-represented polyhedra of small dimension.

Used for the parameter polytopes of intersection configurations. The
variables are always bounded below, so every nonempty polyhedron here is
pointed and is described by its vertices plus extreme rays. Enumeration is
brute force over tight constraint subsets after eliminating the equalities,
which is fine at the sizes that occur (a handful of free parameters).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from tropint._linalg import rank, solve_affine

Vector = Tuple[Fraction, ...]


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class Polyhedron:
    """``{x : eq_lhs x = eq_rhs, ineq_lhs x <= ineq_rhs}`` over the rationals."""

    nvars: int
    eq_lhs: Tuple[Vector, ...]
    eq_rhs: Vector
    ineq_lhs: Tuple[Vector, ...]
    ineq_rhs: Vector

    @classmethod
    def build(cls, nvars, equalities=(), inequalities=()) -> "Polyhedron":
        """Each constraint is ``(coefficients, rhs)``."""
        eq = [(tuple(map(Fraction, a)), Fraction(b)) for a, b in equalities]
        ie = [(tuple(map(Fraction, a)), Fraction(b)) for a, b in inequalities]
        return cls(nvars, tuple(a for a, _ in eq), tuple(b for _, b in eq),
                   tuple(a for a, _ in ie), tuple(b for _, b in ie))

    @cached_property
    def _param(self) -> Optional[Tuple[Vector, List[Vector]]]:
        if self.nvars == 0:
            ok = all(b == 0 for b in self.eq_rhs)
            return ((), []) if ok else None
        if not self.eq_lhs:
            basis = [tuple(Fraction(int(i == j)) for j in range(self.nvars)) for i in range(self.nvars)]
            return tuple(Fraction(0) for _ in range(self.nvars)), basis
        sol = solve_affine(self.eq_lhs, self.eq_rhs)
        if sol is None:
            return None
        x0, basis = sol
        return tuple(x0), [tuple(v) for v in basis]

    def _reduced(self):
        """Inequalities in the coordinates ``y`` of ``x = x0 + N y``."""
        x0, basis = self._param
        rows = [tuple(_dot(g, v) for v in basis) for g in self.ineq_lhs]
        rhs = [h - _dot(g, x0) for g, h in zip(self.ineq_lhs, self.ineq_rhs)]
        return x0, basis, rows, rhs

    def _lift(self, y) -> Vector:
        x0, basis = self._param
        return tuple(x0[i] + sum((yk * v[i] for yk, v in zip(y, basis)), Fraction(0)) for i in range(self.nvars))

    @cached_property
    def _vertices_and_rays(self) -> Tuple[List[Vector], List[Vector]]:
        if self._param is None:
            return [], []
        _, basis, rows, rhs = self._reduced()
        k = len(basis)

        def feasible(y):
            return all(_dot(r, y) <= c for r, c in zip(rows, rhs))

        verts: List[Vector] = []
        if k == 0:
            if feasible(()):
                verts.append(())
        else:
            seen = set()
            for idx in combinations(range(len(rows)), k):
                sol = solve_affine([rows[i] for i in idx], [rhs[i] for i in idx])
                if sol is None or sol[1]:
                    continue
                y = tuple(sol[0])
                if y not in seen and feasible(y):
                    seen.add(y)
                    verts.append(y)
        rays: List[Vector] = []
        if verts and k > 0:
            seen = set()
            for idx in combinations(range(len(rows)), k - 1):
                sol = solve_affine([rows[i] for i in idx] or [[Fraction(0)] * k], [Fraction(0)] * max(1, len(idx)))
                if sol is None or len(sol[1]) != 1:
                    continue
                d = sol[1][0]
                for sgn in (1, -1):
                    dd = tuple(sgn * c for c in d)
                    if all(_dot(r, dd) <= 0 for r in rows):
                        lead = next(abs(c) for c in dd if c != 0)
                        dd = tuple(c / lead for c in dd)
                        if dd not in seen:
                            seen.add(dd)
                            rays.append(dd)
        return sorted(verts), sorted(rays)

    def is_empty(self) -> bool:
        return not self._vertices_and_rays[0]

    def vertices(self) -> List[Vector]:
        return [self._lift(y) for y in self._vertices_and_rays[0]]

    def rays(self) -> List[Vector]:
        _, basis = self._param
        return [tuple(sum((yk * v[i] for yk, v in zip(d, basis)), Fraction(0)) for i in range(self.nvars))
                for d in self._vertices_and_rays[1]]

    @property
    def dimension(self) -> int:
        verts, rays = self._vertices_and_rays
        if not verts:
            return -1
        v0 = verts[0]
        diffs = [tuple(a - b for a, b in zip(v, v0)) for v in verts[1:]] + list(rays)
        return rank(diffs) if diffs and diffs[0] else 0

    def relative_interior_point(self) -> Optional[Vector]:
        verts, rays = self._vertices_and_rays
        if not verts:
            return None
        k = len(verts[0])
        y = [sum((v[i] for v in verts), Fraction(0)) / len(verts) for i in range(k)]
        for d in rays:
            y = [a + b for a, b in zip(y, d)]
        return self._lift(y)

    def strictly_feasible(self, x: Sequence[Fraction]) -> bool:
        return all(_dot(a, x) == b for a, b in zip(self.eq_lhs, self.eq_rhs)) and all(
            _dot(g, x) < h for g, h in zip(self.ineq_lhs, self.ineq_rhs))

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(_dot(a, x) == b for a, b in zip(self.eq_lhs, self.eq_rhs)) and all(
            _dot(g, x) <= h for g, h in zip(self.ineq_lhs, self.ineq_rhs))

    def has_open_interior(self) -> bool:
        """True iff some point satisfies every inequality strictly."""
        z = self.relative_interior_point()
        return z is not None and self.strictly_feasible(z)
