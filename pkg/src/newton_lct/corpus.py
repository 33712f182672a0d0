"""Built-in deterministic corpora for the self-test and the experiment scripts."""

from __future__ import annotations

import random
from fractions import Fraction as F

from .kiselman import ToricPsh
from .monomial import MonomialIdeal
from .sequences import ExplicitTerms, GradedSequence, PowerFamily, ValuationFamily
from .valuation import MonomialValuation


def random_ideal(rng: random.Random, dim: int, max_gens: int = 8, max_exp: int = 10) -> MonomialIdeal:
    """A proper nonzero monomial ideal with at most ``max_gens`` generators."""
    while True:
        k = rng.randint(1, max_gens)
        gens = [tuple(rng.randint(0, max_exp) for _ in range(dim)) for _ in range(k)]
        a = MonomialIdeal(dim, tuple(gens))
        if not a.is_unit:
            return a


def ideal_corpus(count: int = 500, seed: int = 0, max_dim: int = 4, max_gens: int = 8, max_exp: int = 10):
    rng = random.Random(seed)
    return [random_ideal(rng, rng.randint(1, max_dim), max_gens, max_exp) for _ in range(count)]


def random_weights(rng: random.Random, dim: int, denom: int = 6, top: int = 4, positive=True) -> tuple:
    lo = 1 if positive else 0
    while True:
        w = tuple(F(rng.randint(lo, top * denom), denom) for _ in range(dim))
        if any(w):
            return w


def random_valuations(count: int, dim: int, seed: int = 0, denom: int = 6) -> list:
    rng = random.Random(seed)
    return [MonomialValuation(random_weights(rng, dim, denom, positive=False)) for _ in range(count)]


def valuation_families(count: int = 20, seed: int = 0):
    """(family, probe valuation) pairs with small integer-ish weights, dims 1-3."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, 3)
        beta = tuple(F(rng.randint(1, 4), rng.choice((1, 2))) for _ in range(n))
        beta = tuple(b if b >= F(1, 2) else F(1) for b in beta)
        s0 = F(rng.randint(1, 2), rng.choice((1, 2)))
        alpha = random_weights(rng, n, denom=4, top=3, positive=False)
        out.append((ValuationFamily(MonomialValuation(beta), s0), MonomialValuation(alpha)))
    return out


def toric_corpus() -> list:
    """Ten model psh functions in dimensions 1-3."""
    x = MonomialIdeal
    return [
        ToricPsh.monomials((1,)),
        ToricPsh(1, (((3,), F(1, 2)),)),
        ToricPsh.monomials((1, 0), (0, 1)),
        ToricPsh.of_ideal(x.of((2, 0), (0, 3))),
        ToricPsh.of_ideal(x.of((4, 0), (1, 1), (0, 5))),
        ToricPsh.monomials((1, 1)),
        ToricPsh(2, (((F(1, 2), 0), F(1, 4)), ((0, F(3, 2)), -1))),
        ToricPsh.monomials((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        ToricPsh.of_ideal(x.of((2, 0, 0), (0, 3, 0), (0, 0, 5))),
        ToricPsh(3, (((1, 1, 0), 0), ((0, 2, 1), F(1, 3)), ((3, 0, 0), 0))),
    ]


def graded_corpus() -> list:
    x = MonomialIdeal
    return [
        GradedSequence(PowerFamily(x.of((2, 0), (0, 3)))),
        GradedSequence(PowerFamily(x.maximal(2))),
        GradedSequence(PowerFamily(x.of((3, 0, 0), (1, 1, 1), (0, 0, 2), (0, 4, 0)))),
        GradedSequence(ValuationFamily(MonomialValuation.of(1, 2), 1)),
        GradedSequence(ValuationFamily(MonomialValuation.of(F(1, 2), 3), F(3, 2))),
        GradedSequence(ValuationFamily(MonomialValuation.of(1, 1, 2), 1)),
        GradedSequence(ExplicitTerms((x.of((1, 1)), x.of((2, 2), (3, 0))))),
    ]
