"""Demailly-sequence identities on random toric psh functions.

    python scripts/run_demailly_sweep.py --count 20 --levels 8
"""

import argparse
import random
from fractions import Fraction

from newton_lct.corpus import random_valuations
from newton_lct.kiselman import ToricPsh, p102_battery
from newton_lct.monomial import MonomialIdeal


def random_psh(rng, n):
    pieces = []
    for _ in range(rng.randint(1, 4)):
        c = [Fraction(rng.randint(0, 12), rng.randint(1, 3)) for _ in range(n)]
        if not any(c):
            c[0] = Fraction(1)
        pieces.append((tuple(c), Fraction(rng.randint(-4, 4), 2)))
    return ToricPsh(n, tuple(pieces))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--levels", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    bad = 0
    for k in range(args.count):
        n = rng.randint(1, 3)
        phi = random_psh(rng, n)
        for q in (MonomialIdeal.unit(n), MonomialIdeal.maximal(n)):
            rep = p102_battery(phi, q, random_valuations(10, n, seed=args.seed + k), args.levels)
            bad += not rep.passed
            print(f"{'ok ' if rep.passed else 'BAD'} #{k} dim={n} q={q} exponent={rep.details['exponent']} checks={rep.checks}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
