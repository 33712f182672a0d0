"""Monomial valuations computing the jumping number of a graded sequence.

A certificate records a weight vector a* attaining

    lct^q(a.) = min_v (A(v) + v(q)) / v(a.)

over monomial valuations, where v(a.) is read off the exact limit polyhedron.
Results are labelled "toric witness": only monomial valuations are searched.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import RefusedComputation
from .lct import jumping, polyhedron_jumping, ratio
from .monomial import MonomialIdeal
from .rational import INF, Extended, format_rational
from .report import Report
from .sequences import GradedSequence, LimitPolyhedron, ValuationFamily
from .valuation import MonomialValuation, eval_ideal, log_discrepancy

LABEL = "toric witness"


@dataclass(frozen=True)
class WitnessCertificate:
    value: Extended
    valuation: MonomialValuation | None  # canonically scaled
    raw_weights: tuple | None  # LP optimum, normalized so that v(a.) >= 1
    dual_certificate: tuple | None
    generator: tuple | None
    degenerate: bool = False
    label: str = LABEL
    checks: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        def vec(v):
            return None if v is None else [format_rational(a) for a in v]

        return {
            "label": self.label,
            "value": format_rational(self.value),
            "witness": vec(self.valuation.weights) if self.valuation else None,
            "witness_raw": vec(self.raw_weights),
            "witness_simplex": vec(tuple(a / sum(self.raw_weights) for a in self.raw_weights)) if self.raw_weights else None,
            "dual_certificate": vec(self.dual_certificate),
            "q_generator": list(self.generator) if self.generator is not None else None,
            "degenerate": self.degenerate,
        }


def compute_lct_witness(limit: LimitPolyhedron, q: MonomialIdeal) -> WitnessCertificate:
    if not limit.exact:
        raise RefusedComputation("witness search needs an exact limit polyhedron")
    res = polyhedron_jumping(limit.polyhedron, q)
    if res.value is INF:
        # v(a.) = 0 for every v, so every valuation computes the threshold
        return WitnessCertificate(INF, None, None, None, None, degenerate=True)
    return WitnessCertificate(
        res.value,
        res.witness.normalized(),
        res.witness.weights,
        res.dual_certificate,
        res.generator,
    )


def attained_ratio(v: MonomialValuation, limit: LimitPolyhedron, q: MonomialIdeal) -> Extended:
    return ratio(v, limit.support(v), q)


def _random_direction(rng: random.Random, n: int, denom: int = 16) -> tuple:
    while True:
        d = tuple(Fraction(rng.randint(-denom, denom), denom) for _ in range(n))
        if any(d):
            return d


def verify_witness(
    cert: WitnessCertificate,
    seq: GradedSequence,
    q: MonomialIdeal,
    J: int,
    samples: int = 200,
    epsilons=(Fraction(1, 8), Fraction(1, 64)),
    seed: int = 0,
) -> Report:
    """Attainment, local optimality under sampled perturbations, finite-level consistency."""
    rep = Report("witness")
    limit = seq.limit()
    if not limit.exact:
        raise RefusedComputation("witness verification needs an exact limit polyhedron")
    if cert.degenerate:
        rep.record(compute_lct_witness(limit, q).value is INF, check="degenerate")
        return rep
    v = cert.valuation
    got = attained_ratio(v, limit, q)
    rep.record(got == cert.value, check="attainment", expected=cert.value, attained=got)
    rep.details["attained"] = got

    rng = random.Random(seed)
    n = v.dim
    for _ in range(samples):
        d = _random_direction(rng, n)
        for eps in epsilons:
            w = tuple(max(Fraction(0), a + eps * b) for a, b in zip(v.weights, d))
            if not any(w):
                continue
            r = attained_ratio(MonomialValuation(w), limit, q)
            rep.record(r >= cert.value, check="perturbation", weights=w, ratio=r)

    for j in range(1, J + 1):
        a = seq.term(j)
        if a.is_zero:
            continue
        val = j * jumping(a, q).value
        rep.record(val <= cert.value, check="finite_level", j=j, value=val)
    return rep


def self_computation_test(beta: MonomialValuation) -> Report:
    """v_beta computes lct of the sequence a_j = {v_beta >= j}, with value A(v_beta)."""
    rep = Report("self_computation")
    seq = GradedSequence(ValuationFamily(beta, Fraction(1)))
    cert = compute_lct_witness(seq.limit(), MonomialIdeal.unit(beta.dim))
    A = log_discrepancy(beta)
    rep.record(cert.value == A, check="value", value=cert.value, expected=A)
    ok = cert.valuation is not None and cert.valuation.proportional_to(beta)
    rep.record(ok, check="witness", witness=cert.valuation and cert.valuation.weights, beta=beta.weights)
    rep.details["certificate"] = cert
    return rep
