"""Monomial valuations v_a(x^b) = <a, b> on affine n-space."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .monomial import MonomialIdeal, minimalize
from .rational import INF, Extended, as_fraction


@dataclass(frozen=True)
class MonomialValuation:
    weights: tuple

    def __post_init__(self):
        w = tuple(as_fraction(a) for a in self.weights)
        if not w:
            raise ValueError("a valuation needs at least one weight")
        if any(a < 0 for a in w):
            raise ValueError("weights must be nonnegative")
        if all(a == 0 for a in w):
            raise ValueError("the zero weight vector is not a valuation")
        object.__setattr__(self, "weights", w)

    @classmethod
    def of(cls, *weights):
        return cls(tuple(weights))

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def support(self) -> tuple:
        return tuple(i for i, a in enumerate(self.weights) if a > 0)

    def __call__(self, beta) -> Fraction:
        return eval_monomial(self, beta)

    def normalized(self) -> "MonomialValuation":
        """Rescaled so that the smallest positive weight is 1."""
        m = min(a for a in self.weights if a > 0)
        return MonomialValuation(tuple(a / m for a in self.weights))

    def scaled(self, t) -> "MonomialValuation":
        t = as_fraction(t)
        if t <= 0:
            raise ValueError("scale must be positive")
        return MonomialValuation(tuple(t * a for a in self.weights))

    def proportional_to(self, other: "MonomialValuation") -> bool:
        return self.normalized().weights == other.normalized().weights


def eval_monomial(v: MonomialValuation, beta) -> Fraction:
    if len(beta) != v.dim:
        raise ValueError(f"dimension mismatch: expected {v.dim}, got {len(beta)}")
    return sum((a * Fraction(b) for a, b in zip(v.weights, beta)), Fraction(0))


def eval_ideal(v: MonomialValuation, a: MonomialIdeal) -> Extended:
    if a.dim != v.dim:
        raise ValueError(f"dimension mismatch: {v.dim} vs {a.dim}")
    if a.is_zero:
        return INF
    return min(eval_monomial(v, g) for g in a.generators)


def log_discrepancy(v: MonomialValuation) -> Fraction:
    return sum(v.weights, Fraction(0))


def valuation_ideal(v: MonomialValuation, s) -> MonomialIdeal:
    """Monomial ideal generated by x^b with <a, b> >= s."""
    s = as_fraction(s)
    if s < 0:
        raise ValueError("threshold must be nonnegative")
    n = v.dim
    if s == 0:
        return MonomialIdeal.unit(n)
    supp = v.support
    w = [v.weights[i] for i in supp]
    found = []
    prefix = [0] * len(supp)

    # walk coordinates of supp(a) in order; the last one is solved for directly
    def walk(k, partial):
        if k == len(supp) - 1:
            t = max(0, ceil((s - partial) / w[k]))
            prefix[k] = t
            found.append(tuple(prefix))
            return
        u = 0
        while True:
            prefix[k] = u
            walk(k + 1, partial + u * w[k])
            if partial + u * w[k] >= s:
                break
            u += 1
        prefix[k] = 0

    walk(0, Fraction(0))
    gens = []
    for g in found:
        full = [0] * n
        for i, gi in zip(supp, g):
            full[i] = gi
        gens.append(tuple(full))
    return MonomialIdeal(n, tuple(minimalize(gens)))
