"""Log canonical thresholds, jumping numbers and multiplier ideals of monomial ideals.

For a Newton polyhedron with points U and a generator w of q, one LP piece is

    minimize <1 + w, a>  subject to  <u, a> >= 1 (u in U),  a >= 0.

It is solved through its packing dual ``max sum y  s.t.  sum y_u u <= 1 + w``,
which starts from a feasible slack basis; the optimal ``a`` is read off the dual.
The jumping number is the minimum of the pieces over the generators of q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lp import LpProblem, lp_solve, UNBOUNDED
from .monomial import MonomialIdeal
from .polyhedron import NewtonPolyhedron, polyhedral_multiplier_ideal
from .rational import INF, Extended, as_fraction, reciprocal
from .valuation import MonomialValuation, eval_ideal, log_discrepancy


@dataclass(frozen=True)
class ThresholdResult:
    value: Extended
    witness: MonomialValuation | None = None
    dual_certificate: tuple | None = None
    generator: tuple | None = None  # winning generator of q

    @property
    def finite(self) -> bool:
        return self.value is not INF


@dataclass(frozen=True)
class _Piece:
    value: Extended
    alpha: tuple | None
    y: tuple | None


def _piece(points, w) -> _Piece:
    n = len(w)
    matrix = [[u[i] for u in points] for i in range(n)]
    rhs = [1 + Fraction(wi) for wi in w]
    sol = lp_solve(LpProblem.build([1] * len(points), matrix, rhs, "<=", maximize=True))
    if sol.status == UNBOUNDED:
        return _Piece(INF, None, None)
    return _Piece(sol.value, sol.dual, sol.primal)


def polyhedron_jumping(P: NewtonPolyhedron, q: MonomialIdeal) -> ThresholdResult:
    """inf over monomial valuations of (A(v) + v(q)) / v(P)."""
    if q.is_zero:
        raise ValueError("q must be a nonzero ideal")
    if q.dim != P.dim:
        raise ValueError(f"dimension mismatch: {P.dim} vs {q.dim}")
    best = None
    best_w = None
    for w in q.generators:  # canonical order; ties keep the first
        piece = _piece(P.points, w)
        if best is None or piece.value < best.value:
            best, best_w = piece, w
    if best.value is INF:
        return ThresholdResult(INF)
    return ThresholdResult(
        best.value,
        witness=MonomialValuation(best.alpha),
        dual_certificate=best.y,
        generator=best_w,
    )


def jumping(a: MonomialIdeal, q: MonomialIdeal) -> ThresholdResult:
    if q.is_zero:
        raise ValueError("q must be a nonzero ideal")
    if a.dim != q.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {q.dim}")
    if a.is_zero:
        return ThresholdResult(Fraction(0))
    if a.is_unit:
        return ThresholdResult(INF)
    return polyhedron_jumping(NewtonPolyhedron.of_ideal(a), q)


def lct(a: MonomialIdeal) -> ThresholdResult:
    return jumping(a, MonomialIdeal.unit(a.dim))


def arnold(a: MonomialIdeal, q: MonomialIdeal | None = None) -> Extended:
    if q is None:
        q = MonomialIdeal.unit(a.dim)
    return reciprocal(jumping(a, q).value)


def lct_dual(a: MonomialIdeal) -> Extended:
    """1/s for the least s with (s, ..., s) in P(a).

    An independent formulation: variables are convex weights y on the
    generators and s; rows are ``sum y_u u_i - s <= 0`` and ``sum y_u = 1``.
    """
    if a.is_zero:
        return Fraction(0)
    if a.is_unit:
        return INF
    gens = a.generators
    n = a.dim
    m = len(gens)
    matrix = [[Fraction(u[i]) for u in gens] + [Fraction(-1)] for i in range(n)]
    matrix.append([Fraction(1)] * m + [Fraction(0)])
    prob = LpProblem.build([0] * m + [1], matrix, [0] * n + [1], ["<="] * n + ["=="])
    sol = lp_solve(prob)
    return reciprocal(sol.value)


def ratio(v: MonomialValuation, P_value: Extended, q: MonomialIdeal) -> Extended:
    """(A(v) + v(q)) / P_value with x/0 = inf."""
    num = log_discrepancy(v) + eval_ideal(v, q)
    if P_value is INF:
        return Fraction(0)
    if P_value == 0:
        return INF
    return num / P_value


def multiplier_ideal(a: MonomialIdeal, c) -> MonomialIdeal:
    """J(a^c) via the interior criterion on c * P(a)."""
    if a.is_zero:
        raise ValueError("multiplier ideal of the zero ideal is undefined")
    c = as_fraction(c)
    return polyhedral_multiplier_ideal(NewtonPolyhedron.of_ideal(a), c)
