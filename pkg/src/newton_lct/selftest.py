"""Acceptance corpus runner shared by ``newton-lct selftest`` and the test suite.

Each criterion returns a :class:`CriterionResult` whose JSON form is free of
timing, so repeated runs serialize byte-identically. Timings go to the log.
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .corpus import graded_corpus, ideal_corpus, random_valuations, toric_corpus, valuation_families
from .kiselman import kiselman_number, p102_battery, demailly_sequence
from .lct import jumping, lct, lct_dual
from .monomial import MonomialIdeal
from .sequences import (
    GradedSequence,
    arn_sandwich_check,
    controlled_growth_check,
    multiplier_family,
    v_of_graded,
)
from .valuation import MonomialValuation
from .volume import VolumeConfig, slope_fit
from .witness import self_computation_test

log = logging.getLogger(__name__)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0  # excluded from JSON

    def line(self) -> str:
        return f"criterion {self.number:>2} [{'PASS' if self.passed else 'FAIL'}] {self.name}"

    def to_json(self) -> dict:
        from .serialize import to_json

        return {"criterion": self.number, "name": self.name, "passed": self.passed, "details": to_json(self.details)}


@dataclass(frozen=True)
class SelftestConfig:
    seed: int = 0
    threads: int = 1
    ideal_count: int = 500
    mc_samples: int = 10**7
    kiselman_samples: int = 100
    c1_time_limit: float = 30.0
    c9_time_limit: float = 300.0


# -- oracles -----------------------------------------------------------------


def grid_lct(a: MonomialIdeal, N: int) -> Fraction:
    """min over integer weights in {0..N}^n of sum(a)/min_u <a,u>.

    Every value is attained by some monomial valuation, so this is an upper
    bound on lct(a) that equals it once an optimal weight lies on the grid.
    """
    U = np.array(a.generators, dtype=np.int64)
    grid = np.array(list(itertools.product(range(N + 1), repeat=a.dim)), dtype=np.int64)[1:]
    num = grid.sum(axis=1)
    den = (grid @ U.T).min(axis=1)
    ok = den > 0
    num, den = num[ok], den[ok]
    best = (num / den).min()
    cand = np.nonzero(num / den <= best * (1 + 1e-9))[0]
    return min(Fraction(int(num[i]), int(den[i])) for i in cand)


GRID_RESOLUTION = {1: 60, 2: 60, 3: 20, 4: 10}


# -- criteria ----------------------------------------------------------------


def c1_duality(cfg: SelftestConfig) -> CriterionResult:
    ideals = ideal_corpus(cfg.ideal_count, seed=cfg.seed)
    start = time.perf_counter()
    mismatches = []
    for a in ideals:
        p, d = lct(a).value, lct_dual(a)
        if p != d:
            mismatches.append({"ideal": a, "primal": p, "dual": d})
    elapsed = time.perf_counter() - start
    within = elapsed < cfg.c1_time_limit
    return CriterionResult(
        1,
        "LP duality oracle: lct = lct_dual on the random ideal corpus",
        not mismatches and within,
        {"ideals": len(ideals), "mismatches": mismatches[:10], "time_limit_s": cfg.c1_time_limit, "within_time_limit": within},
        elapsed,
    )


def c2_closed_forms(cfg: SelftestConfig) -> CriterionResult:
    bad = []
    count = 0
    for a_, b_ in itertools.product(range(1, 7), repeat=2):
        a = MonomialIdeal.of((a_, 0), (0, b_))
        expected = Fraction(1, a_) + Fraction(1, b_)
        oracle = grid_lct(a, GRID_RESOLUTION[2])
        got = lct(a).value
        count += 1
        if not (oracle == expected == got):
            bad.append({"ideal": a, "expected": expected, "oracle": oracle, "lp": got})
    for n in range(1, 5):
        for k in range(1, 6):
            a = MonomialIdeal.maximal(n) ** k
            expected = Fraction(n, k)
            oracle = grid_lct(a, GRID_RESOLUTION[n])
            got = lct(a).value
            count += 1
            if not (oracle == expected == got):
                bad.append({"ideal": a, "expected": expected, "oracle": oracle, "lp": got})
    return CriterionResult(2, "closed-form thresholds confirmed by grid oracle and LP", not bad, {"cases": count, "failures": bad})


def c3_jumping(cfg: SelftestConfig) -> CriterionResult:
    ideals = ideal_corpus(cfg.ideal_count, seed=cfg.seed)
    bad = [a for a in ideals if jumping(a, MonomialIdeal.unit(a.dim)).value != lct(a).value]
    special = jumping(MonomialIdeal.of((1, 0), (0, 1)), MonomialIdeal.of((1, 0))).value
    return CriterionResult(
        3,
        "jumping(a, unit) = lct(a); jumping((x,y),(x)) = 3",
        not bad and special == 3,
        {"ideals": len(ideals), "mismatches": bad[:10], "jumping_xy_x": special},
    )


def c4_fekete(cfg: SelftestConfig, J: int = 64) -> CriterionResult:
    rows = []
    ok = True
    for fam, v in valuation_families(20, seed=cfg.seed):
        b = v_of_graded(v, GradedSequence(fam), J)
        tol = 2 * max(v.weights) / J
        good = abs(b.bound - b.exact) <= tol
        ok &= good
        rows.append({"beta": fam.valuation.weights, "s0": fam.threshold, "alpha": v.weights, "bound": b.bound, "limit": b.exact, "ok": good})
    return CriterionResult(4, f"Fekete convergence of v(a_j)/j at J = {J}", ok, {"families": rows})


def _multiplier_sequences():
    seqs = [(f"demailly:{i}", demailly_sequence(phi)) for i, phi in enumerate(toric_corpus())]
    for i, g in enumerate(graded_corpus()):
        if g.limit().exact:
            seqs.append((f"graded:{i}", multiplier_family(g)))
    return seqs


def c5_controlled_growth(cfg: SelftestConfig, J: int = 16) -> CriterionResult:
    rows = []
    ok = True
    for name, b in _multiplier_sequences():
        vals = random_valuations(20, b.dim, seed=cfg.seed)
        cg = controlled_growth_check(b, vals, J)
        sandwiches = [arn_sandwich_check(b, q, J) for q in (MonomialIdeal.unit(b.dim), MonomialIdeal.maximal(b.dim))]
        good = cg.passed and all(s.passed for s in sandwiches)
        ok &= good
        rows.append({"sequence": name, "controlled_growth": cg.passed, "arn_sandwich": [s.passed for s in sandwiches], "checks": cg.checks + sum(s.checks for s in sandwiches)})
    return CriterionResult(5, f"controlled growth and Arn sandwich for j <= {J}", ok, {"sequences": rows})


def c6_self_computation(cfg: SelftestConfig) -> CriterionResult:
    rng = random.Random(cfg.seed)
    rows = []
    ok = True
    for _ in range(25):
        n = rng.randint(1, 4)
        beta = MonomialValuation(tuple(Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(n)))
        rep = self_computation_test(beta)
        ok &= rep.passed
        rows.append({"beta": beta.weights, "lambda": rep.details["certificate"].value, "passed": rep.passed})
    return CriterionResult(6, "valuation families are computed by their own valuation", ok, {"cases": rows})


def c7_p102(cfg: SelftestConfig, p: int = 12) -> CriterionResult:
    rows = []
    ok = True
    for i, phi in enumerate(toric_corpus()):
        vals = random_valuations(10, phi.dim, seed=cfg.seed + i)
        for q in (MonomialIdeal.unit(phi.dim), MonomialIdeal.maximal(phi.dim)):
            rep = p102_battery(phi, q, vals, p)
            ok &= rep.passed
            rows.append({"phi": i, "q": q, "exponent": rep.details["exponent"], "checks": rep.checks, "passed": rep.passed})
    return CriterionResult(7, f"threshold, Kiselman and sandwich identities for p <= {p}", ok, {"cases": rows})


def c8_kiselman(cfg: SelftestConfig, tol: float = 1e-6) -> CriterionResult:
    rng = random.Random(cfg.seed)
    corpus = toric_corpus()
    worst = 0.0
    fails = []
    for k in range(cfg.kiselman_samples):
        phi = corpus[k % len(corpus)]
        alpha = tuple(Fraction(rng.randint(1, 24), 8) for _ in range(phi.dim))
        ev = kiselman_number(phi, alpha)
        diff = abs(float(ev.direct_value) - ev.limit_estimate)
        worst = max(worst, diff)
        if diff > tol:
            fails.append({"phi": k % len(corpus), "alpha": alpha, "diff": diff})
    return CriterionResult(
        8, "Kiselman closed form vs deep-s estimate", not fails, {"samples": cfg.kiselman_samples, "tolerance": tol, "max_difference": worst, "failures": fails}
    )


def c9_volume(cfg: SelftestConfig, band=(1.85, 2.15)) -> CriterionResult:
    start = time.perf_counter()
    rows = []
    in_band = True
    ordered = True
    for i, phi in enumerate(toric_corpus()):
        conf = VolumeConfig(samples=cfg.mc_samples, seed=cfg.seed, threads=cfg.threads)
        crit = slope_fit(phi, config=conf)
        half = slope_fit(phi, lam=crit.lam / 2, config=conf, diagnostic=True)
        good = band[0] <= crit.slope <= band[1]
        smaller = half.slope < crit.slope
        in_band &= good
        ordered &= smaller
        rows.append(
            {
                "phi": i,
                "dim": phi.dim,
                "method": crit.method,
                "lambda": crit.lam,
                "slope": round(crit.slope, 10),
                "slope_half_lambda": round(half.slope, 10),
                "in_band": good,
                "half_lambda_smaller": smaller,
            }
        )
    elapsed = time.perf_counter() - start
    within = elapsed < cfg.c9_time_limit
    return CriterionResult(
        9,
        "volume slope at the critical exponent; slope at lambda/2 smaller",
        in_band and ordered and within,
        {
            "band": list(band),
            "all_in_band": in_band,
            "half_lambda_slope_smaller_everywhere": ordered,
            "within_time_limit": within,
            "samples": cfg.mc_samples,
            "functions": rows,
        },
        elapsed,
    )


def c10_determinism(cfg: SelftestConfig) -> CriterionResult:
    """Two in-process runs of a reduced battery must serialize identically.

    The reduced battery covers every code path that could be nondeterministic:
    exact LPs, sequence generation, and threaded Monte Carlo reduction.
    """
    from .serialize import canonical_dumps

    small = SelftestConfig(seed=cfg.seed, threads=max(2, cfg.threads), ideal_count=40, mc_samples=200_000, kiselman_samples=20)

    def battery():
        out = [c.to_json() for c in (c2_closed_forms(small), c3_jumping(small), c6_self_computation(small), c8_kiselman(small))]
        phi = toric_corpus()[7]
        conf = VolumeConfig(samples=small.mc_samples, seed=small.seed, threads=small.threads, stratum_size=1 << 15)
        out.append(slope_fit(phi, config=conf).summary())
        return canonical_dumps(out)

    first, second = battery(), battery()
    return CriterionResult(10, "repeated runs are byte-identical", first == second, {"bytes": len(first)})


CRITERIA = {
    1: c1_duality,
    2: c2_closed_forms,
    3: c3_jumping,
    4: c4_fekete,
    5: c5_controlled_growth,
    6: c6_self_computation,
    7: c7_p102,
    8: c8_kiselman,
    9: c9_volume,
    10: c10_determinism,
}


def run(numbers=None, cfg: SelftestConfig = SelftestConfig()) -> list:
    results = []
    for k in numbers or sorted(CRITERIA):
        t = time.perf_counter()
        res = CRITERIA[k](cfg)
        res.elapsed = res.elapsed or time.perf_counter() - t
        log.info("%s (%.1f s)", res.line(), res.elapsed)
        results.append(res)
    return results
