"""Newton polyhedra ``conv(points) + R^n_{>=0}`` queried through exact LPs.

Only generating points are stored. Membership and interior tests go through
the gauge

    g(p) = max { sum_u y_u : sum_u y_u * u <= p, y >= 0 },

which satisfies ``p in P  <=>  g(p) >= 1`` and, for ``p > 0`` componentwise,
``p in int(P)  <=>  g(p) > 1``. The LP dual of the gauge is
``min { <p, a> : <u, a> >= 1 for all points u, a >= 0 }``, so a non-member
comes with a separating weight for free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .lp import LpProblem, lp_solve, UNBOUNDED, OPTIMAL
from .monomial import MonomialIdeal, minimalize
from .rational import INF, Extended, as_fraction


@dataclass(frozen=True)
class NewtonPolyhedron:
    dim: int
    points: tuple

    def __post_init__(self):
        pts = []
        for p in self.points:
            p = tuple(as_fraction(a) for a in p)
            if len(p) != self.dim:
                raise ValueError(f"dimension mismatch: expected {self.dim}, got {len(p)}")
            if any(a < 0 for a in p):
                raise ValueError("Newton polyhedron points must be nonnegative")
            pts.append(p)
        if not pts:
            raise ValueError("a Newton polyhedron needs at least one point")
        object.__setattr__(self, "points", minimalize(pts))

    @classmethod
    def of_ideal(cls, a: MonomialIdeal) -> "NewtonPolyhedron":
        if a.is_zero:
            raise ValueError("the zero ideal has no Newton polyhedron")
        return cls(a.dim, a.generators)

    def scaled(self, c) -> "NewtonPolyhedron":
        c = as_fraction(c)
        if c <= 0:
            raise ValueError("scaling factor must be positive")
        return NewtonPolyhedron(self.dim, tuple(tuple(c * a for a in p) for p in self.points))

    @property
    def is_orthant(self) -> bool:
        return any(all(a == 0 for a in p) for p in self.points)

    def max_entry(self) -> Fraction:
        return max(max(p) for p in self.points)

    def _check(self, p):
        if len(p) != self.dim:
            raise ValueError(f"dimension mismatch: expected {self.dim}, got {len(p)}")

    def gauge(self, p):
        """(g(p), separating weight or None); g = INF when P is the whole orthant."""
        p = tuple(as_fraction(a) for a in p)
        self._check(p)
        if self.is_orthant:
            return INF, None
        if any(a < 0 for a in p):
            return Fraction(0), None
        # rows: coordinates; columns: points
        matrix = [[u[i] for u in self.points] for i in range(self.dim)]
        prob = LpProblem.build([1] * len(self.points), matrix, p, "<=", maximize=True)
        sol = lp_solve(prob)
        if sol.status == UNBOUNDED:
            return INF, None
        assert sol.status == OPTIMAL
        return sol.value, sol.dual


def gauge(P: NewtonPolyhedron, p) -> Extended:
    return P.gauge(p)[0]


def contains_point(P: NewtonPolyhedron, p) -> bool:
    p = tuple(as_fraction(a) for a in p)
    P._check(p)
    if any(a < 0 for a in p):
        return False
    return P.gauge(p)[0] >= 1


def separating_weight(P: NewtonPolyhedron, p):
    """A weight a >= 0 with <a, p> < support_value(P, a), or None if p is in P."""
    p = tuple(as_fraction(a) for a in p)
    P._check(p)
    if any(a < 0 for a in p):
        i = next(i for i, a in enumerate(p) if a < 0)
        return tuple(Fraction(int(j == i)) for j in range(P.dim))
    g, alpha = P.gauge(p)
    if g >= 1:
        return None
    if g == 0 and alpha is None:
        return None
    return alpha


def interior_contains(P: NewtonPolyhedron, p) -> bool:
    p = tuple(as_fraction(a) for a in p)
    P._check(p)
    if any(a <= 0 for a in p):
        # P sits inside the closed orthant
        return False
    return P.gauge(p)[0] > 1


def support_value(P: NewtonPolyhedron, alpha) -> Fraction:
    """min over P of <alpha, .>; the orthant contributes nothing for alpha >= 0."""
    alpha = tuple(as_fraction(a) for a in alpha)
    P._check(alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("support value is unbounded for a weight with a negative entry")
    if all(a == 0 for a in alpha):
        raise ValueError("support value needs a nonzero weight")
    return min(sum((a * u for a, u in zip(alpha, p)), Fraction(0)) for p in P.points)


def polyhedral_multiplier_ideal(P: NewtonPolyhedron, c) -> MonomialIdeal:
    """Monomial ideal of x^b with b + (1,...,1) in int(c * P)."""
    from .monomial import lattice_minimal_points

    c = as_fraction(c)
    if c < 0:
        raise ValueError("multiplier coefficient must be nonnegative")
    n = P.dim
    if c == 0 or P.is_orthant:
        return MonomialIdeal.unit(n)
    # a minimal generator b has b_i <= floor(max entry of cP): otherwise b - e_i
    # still has b - e_i + 1 strictly above a point of conv(cP)
    bound = floor(c * P.max_entry())
    scaled_points = [[u[i] for u in P.points] for i in range(n)]
    obj = [1] * len(P.points)

    def member(b):
        rhs = [Fraction(bi + 1) / c for bi in b]
        sol = lp_solve(LpProblem.build(obj, scaled_points, rhs, "<=", maximize=True), check=False)
        return sol.status == UNBOUNDED or sol.value > 1

    return MonomialIdeal(n, lattice_minimal_points(member, n, bound))
