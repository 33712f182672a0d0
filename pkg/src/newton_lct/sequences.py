"""Graded and subadditive sequences of monomial ideals and their Fekete limits.

Graded sequences (a_i a_j in a_{i+j}) have v(a.) = inf_j v(a_j)/j and
lct^q(a.) = sup_j j lct^q(a_j). Subadditive sequences (b_{i+j} in b_i b_j)
have v(b.) = sup_j v(b_j)/j and lct^q(b.) = inf_j j lct^q(b_j).

Finite-J quantities are one-sided bounds. An ``exact`` field is only filled
in when the presentation yields the limit polyhedron in closed form.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import RefusedComputation
from .lct import jumping, polyhedron_jumping
from .monomial import MonomialIdeal, ideal_power, ideal_product, ideal_sum
from .polyhedron import NewtonPolyhedron, polyhedral_multiplier_ideal, support_value
from .rational import INF, Extended, as_fraction, format_rational, reciprocal
from .report import Report
from .valuation import MonomialValuation, eval_ideal, log_discrepancy, valuation_ideal


def _gens_json(a: MonomialIdeal):
    return [list(g) for g in a.generators]


# -- presentations -----------------------------------------------------------


@dataclass(frozen=True)
class PowerFamily:
    ideal: MonomialIdeal

    @property
    def dim(self):
        return self.ideal.dim

    def describe(self):
        return {"type": "power", "generators": _gens_json(self.ideal)}


@dataclass(frozen=True)
class ValuationFamily:
    valuation: MonomialValuation
    threshold: Fraction = Fraction(1)

    def __post_init__(self):
        t = as_fraction(self.threshold)
        if t < 0:
            raise ValueError("threshold must be nonnegative")
        object.__setattr__(self, "threshold", t)

    @property
    def dim(self):
        return self.valuation.dim

    def describe(self):
        return {
            "type": "valuation",
            "weights": [format_rational(a) for a in self.valuation.weights],
            "threshold": format_rational(self.threshold),
        }


@dataclass(frozen=True)
class ExplicitTerms:
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an explicit sequence needs at least one term")
        dims = {t.dim for t in self.terms}
        if len(dims) != 1:
            raise ValueError("dimension mismatch among terms")

    @property
    def dim(self):
        return self.terms[0].dim

    def describe(self):
        return {"type": "explicit", "terms": [_gens_json(t) for t in self.terms]}


@dataclass(frozen=True)
class MultiplierFamily:
    """b_j = J(j * P) for an exact limit polyhedron P (asymptotic multiplier ideals)."""

    polyhedron: NewtonPolyhedron
    source: object = None  # the graded presentation or ToricPsh it came from

    @property
    def dim(self):
        return self.polyhedron.dim

    def describe(self):
        src = self.source.describe() if hasattr(self.source, "describe") else None
        return {
            "type": "multiplier",
            "points": [[format_rational(a) for a in p] for p in self.polyhedron.points],
            "source": src,
        }


@dataclass(frozen=True)
class LimitPolyhedron:
    polyhedron: NewtonPolyhedron
    exact: bool
    index: int | None = None  # J for the inner approximation P(a_J)/J

    def support(self, v: MonomialValuation) -> Fraction:
        return support_value(self.polyhedron, v.weights)


# -- sequences ---------------------------------------------------------------


class _Memo:
    def __init__(self, key: str, compute: Callable[[int], MonomialIdeal], cache=None):
        self._key = key
        self._compute = compute
        self._terms = {}
        self._lock = threading.Lock()
        self.cache = cache

    def get(self, j: int) -> MonomialIdeal:
        with self._lock:
            hit = self._terms.get(j)
        if hit is not None:
            return hit
        a = None
        if self.cache is not None:
            a = self.cache.get(self._key, j)
        if a is None:
            a = self._compute(j)
            if self.cache is not None:
                self.cache.put(self._key, j, a)
        with self._lock:
            return self._terms.setdefault(j, a)


def _presentation_key(p) -> str:
    import json

    return json.dumps(p.describe(), sort_keys=True, separators=(",", ":"))


class GradedSequence:
    def __init__(self, presentation, validate: bool = True, cache=None):
        if not isinstance(presentation, (PowerFamily, ValuationFamily, ExplicitTerms)):
            raise TypeError("not a graded presentation")
        self.presentation = presentation
        self.dim = presentation.dim
        self._memo = _Memo(_presentation_key(presentation), self._compute, cache)
        if isinstance(presentation, PowerFamily) and presentation.ideal.is_zero:
            raise ValueError("a graded sequence must have a nonzero term")
        if isinstance(presentation, ExplicitTerms):
            if all(t.is_zero for t in presentation.terms):
                raise ValueError("a graded sequence must have a nonzero term")
            if validate and len(presentation.terms) >= 2:
                rep = check_graded(self, len(presentation.terms))
                if not rep.passed:
                    raise ValueError(f"explicit terms are not graded: {rep.failures[0]}")

    @property
    def cache(self):
        return self._memo.cache

    @cache.setter
    def cache(self, value):
        self._memo.cache = value

    def term(self, j: int) -> MonomialIdeal:
        if j < 1:
            raise ValueError("graded sequences are indexed from 1")
        return self._memo.get(j)

    def _compute(self, j: int) -> MonomialIdeal:
        p = self.presentation
        if isinstance(p, PowerFamily):
            return ideal_power(p.ideal, j)
        if isinstance(p, ValuationFamily):
            return valuation_ideal(p.valuation, j * p.threshold)
        if j <= len(p.terms):
            return p.terms[j - 1]
        # minimal graded closure: the sum of all a_i a_{j-i}
        out = MonomialIdeal.zero(self.dim)
        for i in range(1, j // 2 + 1):
            out = ideal_sum(out, ideal_product(self.term(i), self.term(j - i)))
        return out

    def limit(self) -> LimitPolyhedron:
        p = self.presentation
        n = self.dim
        if isinstance(p, PowerFamily):
            return LimitPolyhedron(NewtonPolyhedron.of_ideal(p.ideal), True)
        if isinstance(p, ValuationFamily):
            if p.threshold == 0:
                return LimitPolyhedron(NewtonPolyhedron(n, ((0,) * n,)), True)
            w = p.valuation.weights
            pts = tuple(
                tuple(p.threshold / w[i] if k == i else Fraction(0) for k in range(n))
                for i in range(n)
                if w[i] > 0
            )
            return LimitPolyhedron(NewtonPolyhedron(n, pts), True)
        J = max(j for j, t in enumerate(p.terms, 1) if not t.is_zero)
        return LimitPolyhedron(NewtonPolyhedron.of_ideal(p.terms[J - 1]).scaled(Fraction(1, J)), False, J)

    def __repr__(self):
        return f"GradedSequence({self.presentation!r})"


class SubadditiveSequence:
    def __init__(self, presentation, validate: bool = True, cache=None):
        if not isinstance(presentation, (MultiplierFamily, ExplicitTerms)):
            raise TypeError("not a subadditive presentation")
        self.presentation = presentation
        self.dim = presentation.dim
        self._memo = _Memo(_presentation_key(presentation), self._compute, cache)
        if isinstance(presentation, ExplicitTerms):
            if any(t.is_zero for t in presentation.terms):
                raise ValueError("subadditive sequences consist of nonzero ideals")
            if validate and len(presentation.terms) >= 2:
                rep = check_subadditive(self, len(presentation.terms))
                if not rep.passed:
                    raise ValueError(f"explicit terms are not subadditive: {rep.failures[0]}")

    @property
    def cache(self):
        return self._memo.cache

    @cache.setter
    def cache(self, value):
        self._memo.cache = value

    @property
    def length(self) -> int | None:
        p = self.presentation
        return len(p.terms) if isinstance(p, ExplicitTerms) else None

    def term(self, j: int) -> MonomialIdeal:
        if j < 0:
            raise ValueError("negative index")
        if j == 0:
            return MonomialIdeal.unit(self.dim)
        n = self.length
        if n is not None and j > n:
            raise IndexError(f"explicit sequence has only {n} terms")
        return self._memo.get(j)

    def _compute(self, j: int) -> MonomialIdeal:
        p = self.presentation
        if isinstance(p, MultiplierFamily):
            return polyhedral_multiplier_ideal(p.polyhedron, j)
        return p.terms[j - 1]

    def limit(self) -> LimitPolyhedron | None:
        p = self.presentation
        if isinstance(p, MultiplierFamily):
            return LimitPolyhedron(p.polyhedron, True)
        return None

    def __repr__(self):
        return f"SubadditiveSequence({self.presentation!r})"


def multiplier_family(seq: GradedSequence, cache=None) -> SubadditiveSequence:
    """The asymptotic multiplier ideals b_j = J(a.^j) of a graded sequence."""
    lim = seq.limit()
    if not lim.exact:
        raise RefusedComputation("asymptotic multiplier ideals need an exact limit polyhedron")
    return SubadditiveSequence(MultiplierFamily(lim.polyhedron, seq.presentation), cache=cache)


# -- checks ------------------------------------------------------------------


def check_graded(seq: GradedSequence, J: int) -> Report:
    if J < 2:
        raise ValueError("J must be at least 2")
    rep = Report("graded")
    for total in range(2, J + 1):
        target = seq.term(total)
        for i in range(1, total // 2 + 1):
            prod = ideal_product(seq.term(i), seq.term(total - i))
            bad = target.non_member(prod)
            rep.record(bad is None, i=i, j=total - i, witness=bad)
    return rep


def check_subadditive(seq: SubadditiveSequence, J: int) -> Report:
    if J < 2:
        raise ValueError("J must be at least 2")
    rep = Report("subadditive")
    for total in range(2, J + 1):
        target = seq.term(total)
        for i in range(1, total // 2 + 1):
            prod = ideal_product(seq.term(i), seq.term(total - i))
            bad = prod.non_member(target)
            rep.record(bad is None, i=i, j=total - i, witness=bad)
    return rep


@dataclass(frozen=True)
class Bounds:
    """A finite-index bound on a Fekete limit plus the exact limit when known."""

    bound: Extended
    exact: Extended | None = None
    side: str = "upper"  # which side of the limit ``bound`` lies on


def v_of_graded(v: MonomialValuation, seq: GradedSequence, J: int) -> Bounds:
    if J < 1:
        raise ValueError("J must be at least 1")
    upper = INF
    for j in range(1, J + 1):
        a = seq.term(j)
        if a.is_zero:
            continue
        val = eval_ideal(v, a) / j
        if val < upper:
            upper = val
    lim = seq.limit()
    exact = lim.support(v) if lim.exact else None
    return Bounds(upper, exact, "upper")


def lct_of_graded(seq: GradedSequence, q: MonomialIdeal, J: int) -> Bounds:
    if J < 1:
        raise ValueError("J must be at least 1")
    lower = None
    for j in range(1, J + 1):
        a = seq.term(j)
        if a.is_zero:
            continue
        val = j * jumping(a, q).value
        if lower is None or val > lower:
            lower = val
    if lower is None:
        raise ValueError(f"all terms up to index {J} are zero")
    lim = seq.limit()
    exact = polyhedron_jumping(lim.polyhedron, q).value if lim.exact else None
    return Bounds(lower, exact, "lower")


def v_of_subadditive(v: MonomialValuation, seq: SubadditiveSequence, J: int) -> Bounds:
    if J < 1:
        raise ValueError("J must be at least 1")
    lower = max(eval_ideal(v, seq.term(j)) / j for j in range(1, J + 1))
    lim = seq.limit()
    exact = lim.support(v) if lim is not None else None
    return Bounds(lower, exact, "lower")


def lct_of_subadditive(seq: SubadditiveSequence, q: MonomialIdeal, J: int) -> Bounds:
    """inf_j j lct^q(b_j): finite J gives an upper bound."""
    upper = INF
    for j in range(1, J + 1):
        val = j * jumping(seq.term(j), q).value
        if val < upper:
            upper = val
    lim = seq.limit()
    exact = polyhedron_jumping(lim.polyhedron, q).value if lim is not None else None
    return Bounds(upper, exact, "upper")


def controlled_growth_check(
    seq: SubadditiveSequence,
    valuations: Iterable[MonomialValuation],
    J: int,
    upper_bounds: Callable[[MonomialValuation], Extended] | None = None,
) -> Report:
    """v(b_j)/j <= v(b.) <= v(b_j)/j + A(v)/j for all j <= J.

    v(b.) is exact for multiplier families. Otherwise a supplied upper bound
    certifies passes, and the always-available lower bound max_j v(b_j)/j
    certifies violations; anything else is reported as uncertified.
    """
    rep = Report("controlled_growth")
    lim = seq.limit()
    uncertified = 0
    for v in valuations:
        vals = [eval_ideal(v, seq.term(j)) / j for j in range(1, J + 1)]
        A = log_discrepancy(v)
        if lim is not None:
            lo = hi = lim.support(v)
        else:
            lo = max(vals)
            hi = upper_bounds(v) if upper_bounds is not None else None
        for j, vj in enumerate(vals, 1):
            rhs = vj + A / j
            info = dict(valuation=v.weights, j=j, v_bj_over_j=vj, bound=rhs, v_limit=lo)
            if lo > rhs:
                rep.record(False, **info)
            elif hi is not None and hi <= rhs:
                rep.record(vj <= lo, side="left", **info)
            else:
                uncertified += 1
                rep.checks += 1
    rep.details["uncertified"] = uncertified
    rep.details["certified"] = uncertified == 0
    return rep


def arn_sandwich_check(seq: SubadditiveSequence, q: MonomialIdeal, J: int) -> Report:
    """Arn^q(b_j)/j <= Arn^q(b.) <= Arn^q(b_j)/j + 1/j and lct^q(b.) > 0."""
    rep = Report("arn_sandwich")
    arn_terms = [reciprocal(jumping(seq.term(j), q).value) / j for j in range(1, J + 1)]
    lim = seq.limit()
    if lim is not None:
        lct_limit = polyhedron_jumping(lim.polyhedron, q).value
        arn = reciprocal(lct_limit)
        rep.details["exact"] = True
    else:
        # inf_j j lct(b_j) over j <= J bounds lct(b.) from above
        arn = max(arn_terms)
        lct_limit = reciprocal(arn)
        rep.details["exact"] = False
    rep.details["arn_limit"] = arn
    for j, aj in enumerate(arn_terms, 1):
        rep.record(aj <= arn, side="left", j=j, arn_bj_over_j=aj, arn_limit=arn)
        rep.record(arn <= aj + Fraction(1, j), side="right", j=j, arn_bj_over_j=aj, arn_limit=arn)
    rep.record(lct_limit > 0, side="positivity", lct_limit=lct_limit)
    return rep


def asymptotic_multiplier_ideal(seq: GradedSequence, j: int, approximate: bool = False) -> MonomialIdeal:
    lim = seq.limit()
    if not lim.exact and not approximate:
        raise RefusedComputation(
            "limit polyhedron is only an inner approximation P(a_J)/J; pass approximate=True to use it"
        )
    return polyhedral_multiplier_ideal(lim.polyhedron, j)
