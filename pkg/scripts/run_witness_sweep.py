"""Witness search and verification over random valuation-truncation families.

For each random weight vector b the family a_j = {v_b >= j} should be computed
by v_b itself with threshold sum(b); every certificate is also verified against
perturbations and finite levels.

    python scripts/run_witness_sweep.py --count 50 --max-dim 4
"""

import argparse
import random
from fractions import Fraction

from newton_lct.monomial import MonomialIdeal
from newton_lct.sequences import GradedSequence, ValuationFamily
from newton_lct.valuation import MonomialValuation
from newton_lct.witness import compute_lct_witness, verify_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=25)
    ap.add_argument("--max-dim", type=int, default=4)
    ap.add_argument("--levels", type=int, default=6, help="finite levels j checked per family")
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    failures = 0
    for k in range(args.count):
        n = rng.randint(1, args.max_dim)
        beta = MonomialValuation(tuple(Fraction(rng.randint(1, 12), rng.randint(1, 4)) for _ in range(n)))
        seq = GradedSequence(ValuationFamily(beta, 1))
        q = MonomialIdeal.unit(n)
        cert = compute_lct_witness(seq.limit(), q)
        rep = verify_witness(cert, seq, q, args.levels, samples=args.samples, seed=args.seed + k)
        ok = rep.passed and cert.value == sum(beta.weights) and cert.valuation.proportional_to(beta)
        failures += not ok
        weights = ", ".join(str(w) for w in beta.weights)
        found = ", ".join(str(w) for w in cert.valuation.weights)
        print(f"{'ok ' if ok else 'BAD'} beta=({weights}) lambda={cert.value} witness=({found}) checks={rep.checks}")
    print(f"{args.count - failures}/{args.count} families computed by their own valuation")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
