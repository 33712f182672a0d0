"""Exact rational simplex (two phases, Bland's rule) with dual extraction.

Variables are always nonnegative. A row is ``sum_j A[i][j] x_j  <sense>  b[i]``
with sense one of ``"<="``, ``">="``, ``"=="``.

Dual sign conventions returned in :class:`LpSolution` are the textbook ones
for the problem *as stated*: for a minimization, ``y_i >= 0`` on ``>=`` rows,
``y_i <= 0`` on ``<=`` rows and ``A^T y <= c``; for a maximization, the signs
flip and ``A^T y >= c``. On optimal status ``b . y == c . x`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

try:  # gmpy2's mpq is an order of magnitude faster than Fraction in the pivots
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

from .rational import as_fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_SENSES = ("<=", ">=", "==")


@dataclass(frozen=True)
class LpProblem:
    objective: tuple
    matrix: tuple
    rhs: tuple
    senses: tuple
    maximize: bool = False

    def __post_init__(self):
        n = len(self.objective)
        if len(self.matrix) != len(self.rhs) or len(self.rhs) != len(self.senses):
            raise ValueError("matrix, rhs and senses must have the same number of rows")
        for row in self.matrix:
            if len(row) != n:
                raise ValueError("every constraint row must have one entry per variable")
        for s in self.senses:
            if s not in _SENSES:
                raise ValueError(f"unknown constraint sense {s!r}")

    @classmethod
    def build(cls, objective, matrix, rhs, senses, maximize=False):
        if isinstance(senses, str):
            senses = [senses] * len(rhs)
        return cls(
            tuple(as_fraction(c) for c in objective),
            tuple(tuple(as_fraction(a) for a in row) for row in matrix),
            tuple(as_fraction(b) for b in rhs),
            tuple(senses),
            maximize,
        )

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Fraction | None = None
    primal: tuple = ()
    dual: tuple = ()
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class _Tableau:
    rows: list
    cost: list
    basis: list
    pivots: int = 0
    barred: set = field(default_factory=set)

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            prow = [a * inv for a in prow]
            self.rows[r] = prow
        nz = [j for j, a in enumerate(prow) if a]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        f = self.cost[c]
        if f:
            for j in nz:
                self.cost[j] -= f * prow[j]
        self.basis[r] = c
        self.pivots += 1

    def run(self) -> bool:
        """Bland's rule iterations; returns False on unboundedness."""
        ncols = len(self.cost) - 1
        while True:
            enter = -1
            for j in range(ncols):
                if self.cost[j] < 0 and j not in self.barred:
                    enter = j
                    break
            if enter < 0:
                return True
            leave = -1
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leave])
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                return False
            self.pivot(leave, enter)


def lp_solve(problem: LpProblem, check: bool = __debug__) -> LpSolution:
    """Solve ``problem`` exactly. Never raises on degenerate input."""
    n = problem.num_vars
    m = len(problem.rhs)
    sign = -1 if problem.maximize else 1
    c = [_Q(sign * x) for x in problem.objective]

    # Standard form: every rhs >= 0, one slack/surplus per inequality,
    # one artificial per row lacking a unit slack.
    negated = []
    rows_a, rows_b, senses = [], [], []
    for row, b, s in zip(problem.matrix, problem.rhs, problem.senses):
        row = [_Q(a) for a in row]
        b = _Q(b)
        if b < 0:
            row = [-a for a in row]
            b = -b
            s = {"<=": ">=", ">=": "<=", "==": "=="}[s]
            negated.append(True)
        else:
            negated.append(False)
        rows_a.append(row)
        rows_b.append(b)
        senses.append(s)

    n_slack = sum(1 for s in senses if s != "==")
    n_art = sum(1 for s in senses if s != "<=")
    ncols = n + n_slack + n_art
    rows = []
    basis = []
    unit_col = []  # column holding e_i in the starting basis
    art_cols = set()
    k_slack = n
    k_art = n + n_slack
    for i in range(m):
        full = rows_a[i] + [_Q(0)] * (n_slack + n_art) + [rows_b[i]]
        if senses[i] == "<=":
            full[k_slack] = _Q(1)
            basis.append(k_slack)
            unit_col.append(k_slack)
            k_slack += 1
        else:
            if senses[i] == ">=":
                full[k_slack] = _Q(-1)
                k_slack += 1
            full[k_art] = _Q(1)
            basis.append(k_art)
            unit_col.append(k_art)
            art_cols.add(k_art)
            k_art += 1
        rows.append(full)

    tab = _Tableau(rows=rows, cost=[], basis=basis)

    if art_cols:
        # phase 1: minimize the sum of artificials
        cost = [_Q(0)] * (ncols + 1)
        for j in art_cols:
            cost[j] = _Q(1)
        for i, bcol in enumerate(basis):
            if bcol in art_cols:
                for j in range(ncols + 1):
                    cost[j] -= rows[i][j]
        tab.cost = cost
        tab.run()
        if -tab.cost[-1] > 0:
            return LpSolution(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if tab.basis[i] in art_cols:
                for j in range(n + n_slack):
                    if tab.rows[i][j] != 0:
                        tab.pivot(i, j)
                        break
        tab.barred = set(art_cols)

    # phase 2
    cost = [_Q(0)] * (ncols + 1)
    for j in range(n):
        cost[j] = c[j]
    for i, bcol in enumerate(tab.basis):
        cb = cost[bcol] if bcol < n else 0
        if cb:
            row = tab.rows[i]
            for j in range(ncols + 1):
                cost[j] -= cb * row[j]
    # basic columns must have zero reduced cost
    tab.cost = cost
    if not tab.run():
        return LpSolution(UNBOUNDED, pivots=tab.pivots)

    x = [_Q(0)] * ncols
    for i, bcol in enumerate(tab.basis):
        x[bcol] = tab.rows[i][-1]
    value = -tab.cost[-1]
    # y_i = c_k - d_k for the starting unit column k of row i (its cost is 0)
    y = [-tab.cost[unit_col[i]] for i in range(m)]
    y = [-yi if neg else yi for yi, neg in zip(y, negated)]
    if problem.maximize:
        value = -value
        y = [-yi for yi in y]

    sol = LpSolution(
        OPTIMAL,
        value=as_fraction(value),
        primal=tuple(as_fraction(v) for v in x[:n]),
        dual=tuple(as_fraction(v) for v in y),
        pivots=tab.pivots,
    )
    if check:
        verify_certificate(problem, sol)
    return sol


def verify_certificate(problem: LpProblem, sol: LpSolution) -> None:
    """Exact primal feasibility, dual feasibility and strong duality; raises AssertionError."""
    x, y = sol.primal, sol.dual
    cx = sum((c * xi for c, xi in zip(problem.objective, x)), Fraction(0))
    by = sum((b * yi for b, yi in zip(problem.rhs, y)), Fraction(0))
    if not (cx == sol.value == by):
        raise AssertionError(f"duality gap: c.x={cx}, b.y={by}, value={sol.value}")
    if any(xi < 0 for xi in x):
        raise AssertionError("negative primal entry")
    for row, b, s in zip(problem.matrix, problem.rhs, problem.senses):
        ax = sum((a * xi for a, xi in zip(row, x)), Fraction(0))
        if (s == "<=" and ax > b) or (s == ">=" and ax < b) or (s == "==" and ax != b):
            raise AssertionError("primal infeasible row")
    flip = -1 if problem.maximize else 1
    for yi, s in zip(y, problem.senses):
        if (s == ">=" and flip * yi < 0) or (s == "<=" and flip * yi > 0):
            raise AssertionError("dual sign violated")
    for j, c in enumerate(problem.objective):
        aty = sum((row[j] * yi for row, yi in zip(problem.matrix, y)), Fraction(0))
        if flip * (c - aty) < 0:
            raise AssertionError("dual infeasible column")


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))
