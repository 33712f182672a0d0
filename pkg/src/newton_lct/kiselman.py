"""Toric model psh functions phi(z) = max_i (<c_i, log|z|> + d_i) and their invariants.

The polydisc supremum is H(t) = max_i (<c_i, t> + d_i), so the Kiselman number
h(a) = lim_{s -> -inf} H(log(eps) + s a) / s equals min_i <c_i, a>, the support
value of P_phi = conv{c_i} + R^n_{>=0}. Constants d_i only shift H.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .lct import ThresholdResult, polyhedron_jumping
from .monomial import MonomialIdeal
from .polyhedron import NewtonPolyhedron, contains_point, support_value
from .rational import as_fraction, format_rational, reciprocal
from .report import Report
from .sequences import (
    MultiplierFamily,
    SubadditiveSequence,
    controlled_growth_check,
    v_of_subadditive,
)
from .valuation import MonomialValuation
from .lct import jumping

DEFAULT_EPSILON = Fraction(1, 2)
DEFAULT_DEPTH = -(10**8)


@dataclass(frozen=True)
class ToricPsh:
    dim: int
    pieces: tuple  # ((c_1, d_1), ...)

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a toric psh function needs at least one piece")
        out = []
        for c, d in self.pieces:
            c = tuple(as_fraction(a) for a in c)
            if len(c) != self.dim:
                raise ValueError(f"dimension mismatch: expected {self.dim}, got {len(c)}")
            if any(a < 0 for a in c):
                raise ValueError("piece exponents must be nonnegative")
            out.append((c, as_fraction(d)))
        object.__setattr__(self, "pieces", tuple(out))

    @classmethod
    def of_ideal(cls, a: MonomialIdeal, scale=1) -> "ToricPsh":
        """scale * log|a| = scale * log max_i |x^{u_i}|."""
        if a.is_zero:
            raise ValueError("log|0| is identically -inf")
        s = as_fraction(scale)
        return cls(a.dim, tuple((tuple(s * x for x in u), Fraction(0)) for u in a.generators))

    @classmethod
    def monomials(cls, *exponents, dim=None) -> "ToricPsh":
        dim = dim or len(exponents[0])
        return cls(dim, tuple((c, 0) for c in exponents))

    @property
    def exponents(self) -> tuple:
        return tuple(c for c, _ in self.pieces)

    def polyhedron(self) -> NewtonPolyhedron:
        return NewtonPolyhedron(self.dim, self.exponents)

    def maximum(self, other: "ToricPsh") -> "ToricPsh":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return ToricPsh(self.dim, self.pieces + other.pieces)

    def shifted(self, const) -> "ToricPsh":
        const = as_fraction(const)
        return ToricPsh(self.dim, tuple((c, d + const) for c, d in self.pieces))

    def scaled(self, t) -> "ToricPsh":
        t = as_fraction(t)
        if t <= 0:
            raise ValueError("scale must be positive")
        return ToricPsh(self.dim, tuple((tuple(t * a for a in c), t * d) for c, d in self.pieces))

    def describe(self) -> dict:
        return {
            "type": "toric_psh",
            "pieces": [{"c": [format_rational(a) for a in c], "d": format_rational(d)} for c, d in self.pieces],
        }


def sup_on_polydisc(phi: ToricPsh, t) -> Fraction:
    """H(t): the supremum of phi over the polydisc of polyradius exp(t)."""
    t = tuple(as_fraction(x) for x in t)
    if len(t) != phi.dim:
        raise ValueError("dimension mismatch")
    if any(x > 0 for x in t):
        raise ValueError("polydisc log-radii must be <= 0")
    return max(sum((a * x for a, x in zip(c, t)), Fraction(0)) + d for c, d in phi.pieces)


def _sup_float(phi: ToricPsh, t) -> float:
    return max(sum(float(a) * x for a, x in zip(c, t)) + float(d) for c, d in phi.pieces)


@dataclass(frozen=True)
class KiselmanEvaluation:
    alpha: tuple
    direct_value: Fraction
    limit_estimate: float
    s_used: float
    tolerance: float


def kiselman_number(
    phi: ToricPsh, alpha, epsilon=DEFAULT_EPSILON, s: float = DEFAULT_DEPTH
) -> KiselmanEvaluation:
    """Closed form min_i <c_i, a> next to the finite-s quotient H(log eps + s a)/s.

    The quotient differs from the limit by at most max_i |<c_i, 1> log eps + d_i| / |s|
    (plus float rounding), which is reported as the tolerance.
    """
    if isinstance(alpha, MonomialValuation):
        alpha = alpha.weights
    alpha = MonomialValuation(tuple(alpha)).weights
    if len(alpha) != phi.dim:
        raise ValueError("dimension mismatch")
    direct = support_value(phi.polyhedron(), alpha)
    if s >= 0:
        raise ValueError("the limit is taken as s -> -inf")
    le = math.log(float(epsilon))
    t = [le + s * float(a) for a in alpha]
    estimate = _sup_float(phi, t) / s
    offset = max(abs(float(sum(c)) * le + float(d)) for c, d in phi.pieces)
    scale = max(abs(x) for x in t) * max(float(max(c)) for c in phi.exponents) + offset
    tol = offset / abs(s) + 8 * math.ulp(max(scale, 1.0)) / abs(s) * len(alpha)
    return KiselmanEvaluation(alpha, direct, estimate, s, tol)


def tau(phi: ToricPsh, alpha) -> Fraction:
    return support_value(phi.polyhedron(), tuple(alpha))


def dominated(phi: ToricPsh, psi: ToricPsh) -> bool:
    """phi <= psi + O(1) near 0: every exponent of phi lies in P_psi."""
    P = psi.polyhedron()
    return all(contains_point(P, c) for c in phi.exponents)


def _random_weight(rng, n, denom=12):
    while True:
        a = tuple(Fraction(rng.randint(0, 3 * denom), denom) for _ in range(n))
        if any(a):
            return a


def lemma_battery(phi: ToricPsh, psi: ToricPsh, samples: int = 100, seed: int = 0) -> Report:
    """Nonnegativity, homogeneity, concavity, monotonicity, domination, max/min rule."""
    if phi.dim != psi.dim:
        raise ValueError("dimension mismatch")
    rep = Report("kiselman_lemmas")
    rng = random.Random(seed)
    n = phi.dim
    both = phi.maximum(psi)
    phi_dom_psi = dominated(phi, psi)
    psi_dom_phi = dominated(psi, phi)
    shifted = phi.shifted(Fraction(rng.randint(-9, 9), 4))
    for _ in range(samples):
        a = _random_weight(rng, n)
        b = _random_weight(rng, n)
        t = Fraction(rng.randint(0, 8), 8)
        scale = Fraction(rng.randint(1, 20), 7)
        ha, hb = tau(phi, a), tau(phi, b)
        rep.record(ha >= 0, check="nonnegative", alpha=a)
        rep.record(tau(phi, tuple(scale * x for x in a)) == scale * ha, check="homogeneous", alpha=a)
        mix = tuple(t * x + (1 - t) * y for x, y in zip(a, b))
        rep.record(tau(phi, mix) >= t * ha + (1 - t) * hb, check="concave", alpha=a, beta=b, t=t)
        i = rng.randrange(n)
        bumped = tuple(x + (Fraction(1, 3) if k == i else 0) for k, x in enumerate(a))
        rep.record(tau(phi, bumped) >= ha, check="increasing", alpha=a, coordinate=i)
        tp, tq, tm = ha, tau(psi, a), tau(both, a)
        rep.record(tm == min(tp, tq), check="max_is_min", alpha=a)
        rep.record(tm <= tp and tm <= tq, check="domination_by_max", alpha=a)
        if phi_dom_psi:
            rep.record(tp >= tq, check="domination", alpha=a)
        if psi_dom_phi:
            rep.record(tq >= tp, check="domination", alpha=a)
        rep.record(tau(shifted, a) == ha, check="constant_shift", alpha=a)
    return rep


def singularity_exponent(phi: ToricPsh, q: MonomialIdeal | None = None) -> ThresholdResult:
    """c^q(phi): the jumping-number LP on P_phi; the constants d_i play no role."""
    if q is None:
        q = MonomialIdeal.unit(phi.dim)
    return polyhedron_jumping(phi.polyhedron(), q)


def demailly_sequence(phi: ToricPsh, cache=None) -> SubadditiveSequence:
    """b_j = J(j phi) = {b : b + 1 in int(j P_phi)}."""
    return SubadditiveSequence(MultiplierFamily(phi.polyhedron(), phi), cache=cache)


def p102_battery(phi: ToricPsh, q: MonomialIdeal, valuations, J: int) -> Report:
    """Threshold identity, controlled growth, v(phi) = v(b.), and the Arnold-scale sandwich at each level p."""
    from .witness import compute_lct_witness

    rep = Report("p102")
    b = demailly_sequence(phi)
    c = singularity_exponent(phi, q).value
    cert = compute_lct_witness(b.limit(), q)
    rep.record(c == cert.value, check="threshold_identity", exponent=c, sequence_lct=cert.value)
    rep.details["exponent"] = c

    valuations = list(valuations)
    rep.merge(controlled_growth_check(b, valuations, J))
    for v in valuations:
        k = kiselman_number(phi, v).direct_value
        bounds = v_of_subadditive(v, b, J)
        rep.record(k == bounds.exact, check="kiselman_equals_sequence", alpha=v.weights, tau=k, v_b=bounds.exact)
        rep.record(bounds.bound <= k, check="kiselman_lower_bound", alpha=v.weights)

    inv = reciprocal(c)
    for p in range(1, J + 1):
        lp = p * jumping(b.term(p), q).value
        lo = reciprocal(lp)
        rep.record(lo <= inv, check="sandwich_left", p=p, lower=lo, value=inv)
        rep.record(inv <= lo + Fraction(1, p), check="sandwich_right", p=p, lower=lo, value=inv)
    return rep
