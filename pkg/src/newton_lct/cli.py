"""Command-line front end: ``newton-lct <subcommand> [--input FILE]``.

Exit codes: 0 success, 2 invalid input, 3 refused computation, 4 a checked
property failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction

from . import __version__
from .cache import TermCache
from .errors import RefusedComputation, ValidationError
from .kiselman import kiselman_number, lemma_battery, p102_battery
from .lct import jumping, lct, lct_dual, multiplier_ideal
from .monomial import MonomialIdeal
from .rational import parse_rational
from .report import Report
from .sequences import (
    arn_sandwich_check,
    check_graded,
    check_subadditive,
    controlled_growth_check,
    lct_of_graded,
    lct_of_subadditive,
    v_of_graded,
    v_of_subadditive,
)
from .serialize import (
    canonical_dumps,
    graded_from,
    ideal_from,
    input_hash,
    psh_from,
    subadditive_from,
    to_json,
    validate_document,
    valuation_from,
)
from .valuation import eval_ideal, log_discrepancy, valuation_ideal

EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_PROPERTY = 0, 2, 3, 4
TOOL = "newton-lct"
log = logging.getLogger(TOOL)

EXPECTED_KINDS = {
    "lct": ("ideal",),
    "jump": ("ideal",),
    "multiplier": ("ideal",),
    "valuate": ("valuation",),
    "sequence": ("graded_sequence", "subadditive_sequence"),
    "witness": ("graded_sequence",),
    "kiselman": ("toric_psh",),
    "p102": ("toric_psh",),
    "volume": ("experiment",),
}


class Outcome:
    def __init__(self, result, passed=True, csv=None):
        self.result = result
        self.passed = passed
        self.csv = csv


def _q(doc):
    return ideal_from(doc["q"], doc["dim"]) if "q" in doc else MonomialIdeal.unit(doc["dim"])


def _valuations(doc, dim):
    return [valuation_from(w, dim) for w in doc.get("valuations", [])]


def _threshold_json(res, extra=None):
    out = to_json(res)
    out["witness_raw"] = out.pop("witness")
    w = res.witness
    # "witness" sums to 1; "witness_min_one" has smallest positive weight 1
    out["witness"] = None if w is None else to_json([a / sum(w.weights) for a in w.weights])
    out["witness_min_one"] = None if w is None else to_json(list(w.normalized().weights))
    out.update(extra or {})
    return out


# -- operations ----------------------------------------------------------------


def op_lct(doc, args, cache):
    a = ideal_from(doc["generators"], doc["dim"])
    res = lct(a)
    dual = lct_dual(a)
    return Outcome(_threshold_json(res, {"ideal": a, "dual_value": dual}), passed=dual == res.value)


def op_jump(doc, args, cache):
    a = ideal_from(doc["generators"], doc["dim"])
    q = _q(doc)
    return Outcome(_threshold_json(jumping(a, q), {"ideal": a, "q": q}))


def op_multiplier(doc, args, cache):
    if "c" not in doc:
        raise ValidationError("multiplier: field 'c' is required")
    a = ideal_from(doc["generators"], doc["dim"])
    c = parse_rational(doc["c"])
    if c < 0:
        raise ValidationError("multiplier: c must be nonnegative")
    return Outcome({"ideal": a, "c": c, "multiplier_ideal": multiplier_ideal(a, c)})


def op_valuate(doc, args, cache):
    v = valuation_from(doc["weights"], doc["dim"])
    out = {"valuation": v, "log_discrepancy": log_discrepancy(v), "normalized": v.normalized()}
    if "ideal" in doc:
        a = ideal_from(doc["ideal"], doc["dim"])
        out["ideal"] = a
        out["value"] = eval_ideal(v, a)
    if "threshold" in doc:
        s = parse_rational(doc["threshold"])
        if s < 0:
            raise ValidationError("valuate: threshold must be nonnegative")
        out["valuation_ideal"] = valuation_ideal(v, s)
    return Outcome(out)


def op_sequence(doc, args, cache):
    dim, J = doc["dim"], args.max_index
    q = _q(doc)
    vals = _valuations(doc, dim)
    if doc["kind"] == "graded_sequence":
        seq = graded_from(doc["presentation"], dim, cache=cache)
        t = time.perf_counter()
        terms = [seq.term(j) for j in range(1, J + 1)]
        log.info("computed %d terms in %.3f s", J, time.perf_counter() - t)
        rep = check_graded(seq, J) if J >= 2 else Report("graded")
        lim = seq.limit()
        out = {
            "kind": "graded_sequence",
            "terms": {str(j): a for j, a in enumerate(terms, 1)},
            "graded_check": rep,
            "limit": {"polyhedron": lim.polyhedron, "exact": lim.exact, "index": lim.index},
            "lct": _bounds(lct_of_graded(seq, q, J)),
            "valuations": [{"valuation": v, **_bounds(v_of_graded(v, seq, J))} for v in vals],
        }
        return Outcome(out, passed=rep.passed)
    seq = subadditive_from(doc["presentation"], dim, cache=cache)
    if seq.length is not None:
        J = min(J, seq.length)
    t = time.perf_counter()
    terms = [seq.term(j) for j in range(1, J + 1)]
    log.info("computed %d terms in %.3f s", J, time.perf_counter() - t)
    rep = check_subadditive(seq, J) if J >= 2 else Report("subadditive")
    lim = seq.limit()
    cg = controlled_growth_check(seq, vals, J)
    arn = arn_sandwich_check(seq, q, J)
    out = {
        "kind": "subadditive_sequence",
        "terms": {str(j): a for j, a in enumerate(terms, 1)},
        "subadditive_check": rep,
        "limit": None if lim is None else {"polyhedron": lim.polyhedron, "exact": lim.exact},
        "lct": _bounds(lct_of_subadditive(seq, q, J)),
        "valuations": [{"valuation": v, **_bounds(v_of_subadditive(v, seq, J))} for v in vals],
        "controlled_growth": cg,
        "arn_sandwich": arn,
    }
    return Outcome(out, passed=rep.passed and cg.passed and arn.passed)


def _bounds(b):
    return {"bound": b.bound, "side": b.side, "exact": b.exact}


def op_witness(doc, args, cache):
    from .witness import compute_lct_witness, verify_witness

    seq = graded_from(doc["presentation"], doc["dim"], cache=cache)
    q = _q(doc)
    lim = seq.limit()
    if not lim.exact:
        raise RefusedComputation("witness: the limit polyhedron of this sequence is not exact")
    cert = compute_lct_witness(lim, q)
    rep = verify_witness(cert, seq, q, args.max_index, samples=args.samples, seed=args.seed)
    return Outcome({"certificate": cert, "verification": rep, "q": q}, passed=rep.passed)


def op_kiselman(doc, args, cache):
    phi = psh_from(doc["pieces"], doc["dim"])
    eps = parse_rational(args.epsilon) if args.epsilon else Fraction(1, 2)
    if not 0 < eps < 1:
        raise ValidationError("--epsilon must lie in (0, 1)")
    vals = _valuations(doc, phi.dim) or [valuation_from(["1"] * phi.dim)]
    rows = []
    for v in vals:
        ev = kiselman_number(phi, v, epsilon=eps)
        rows.append(
            {
                "alpha": list(ev.alpha),
                "value": ev.direct_value,
                "limit_estimate": ev.limit_estimate,
                "s_used": ev.s_used,
                "tolerance": ev.tolerance,
            }
        )
    out = {"phi": phi, "epsilon": eps, "numbers": rows}
    passed = True
    if "psi" in doc:
        psi = psh_from(doc["psi"], doc["dim"])
        rep = lemma_battery(phi, psi, samples=args.samples, seed=args.seed)
        out["lemma_battery"] = rep
        passed = rep.passed
    return Outcome(out, passed=passed)


def op_p102(doc, args, cache):
    from .corpus import random_valuations

    phi = psh_from(doc["pieces"], doc["dim"])
    q = _q(doc)
    vals = _valuations(doc, phi.dim) or random_valuations(10, phi.dim, seed=args.seed)
    rep = p102_battery(phi, q, vals, args.max_index)
    return Outcome({"phi": phi, "q": q, "battery": rep}, passed=rep.passed)


def op_volume(doc, args, cache):
    from .volume import VolumeConfig, slope_fit

    phi = psh_from(doc["pieces"], doc["dim"])
    q = _q(doc)
    cfg = VolumeConfig(
        delta=float(args.delta) if args.delta else 0.5,
        method=doc.get("method", "auto"),
        samples=args.samples if args.samples_given else 10**6,
        seed=args.seed,
        threads=args.threads,
        r_min=doc.get("r_min", 1e-6),
        r_max=doc.get("r_max", 1e-2),
        points=doc.get("points", 20),
    )
    lam = parse_rational(doc["lambda"]) if "lambda" in doc else None
    try:
        prof = slope_fit(phi, q, lam, cfg, diagnostic=doc.get("diagnostic", False))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    return Outcome({"phi": phi, "q": q, "profile": prof.summary()}, csv=prof.to_csv())


def op_selftest(args):
    from .selftest import SelftestConfig, run

    nums = sorted({int(x) for x in args.only.split(",")}) if args.only else None
    cfg = SelftestConfig(seed=args.seed, threads=args.threads)
    results = run(nums, cfg)
    for r in results:
        print(r.line(), file=sys.stderr)
    return Outcome({"criteria": [r.to_json() for r in results]}, passed=all(r.passed for r in results))


OPERATIONS = {
    "lct": op_lct,
    "jump": op_jump,
    "multiplier": op_multiplier,
    "valuate": op_valuate,
    "sequence": op_sequence,
    "witness": op_witness,
    "kiselman": op_kiselman,
    "p102": op_p102,
    "volume": op_volume,
}


# -- plumbing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", metavar="FILE", help="problem document (default: stdin)")
    common.add_argument("--max-index", "--j", dest="max_index", type=int, default=12, metavar="J")
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--epsilon", default=None, help="polydisc radius for Kiselman estimates (rational)")
    common.add_argument("--delta", default=None, help="polydisc radius for volume experiments")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--pretty", action="store_true", help="human-readable summary on stderr")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog=TOOL, description="Exact thresholds of monomial ideals and toric psh functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in (*OPERATIONS, "selftest"):
        p = sub.add_parser(name, parents=[common])
        if name == "selftest":
            p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return parser


def _read_document(path):
    try:
        text = open(path).read() if path else sys.stdin.read()
    except OSError as exc:
        raise ValidationError(f"cannot read input: {exc}") from None
    try:
        doc = json.loads(text, parse_float=lambda s: float(s))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc}") from None
    return validate_document(doc)


def _parameters(args):
    return {
        "max_index": args.max_index,
        "samples": args.samples,
        "epsilon": args.epsilon,
        "delta": args.delta,
    }


def _pretty(doc):
    def walk(x, prefix=""):
        if isinstance(x, dict):
            for k in sorted(x):
                yield from walk(x[k], f"{prefix}.{k}" if prefix else k)
        elif isinstance(x, list) and x and isinstance(x[0], (dict, list)):
            for i, v in enumerate(x):
                yield from walk(v, f"{prefix}[{i}]")
        else:
            yield prefix, json.dumps(x)

    rows = list(walk(doc["result"]))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose or args.pretty else logging.WARNING, format="%(name)s: %(message)s", stream=sys.stderr)
    args.samples_given = args.samples is not None
    if args.samples is None:
        args.samples = 200
    start = time.perf_counter()
    try:
        if args.samples < 1 or args.max_index < 1 or args.threads < 1:
            raise ValidationError("--samples, --max-index and --threads must be positive")
        if args.command == "selftest":
            doc_in = {"selftest": True}
            outcome = op_selftest(args)
        else:
            doc_in = _read_document(args.input)
            if doc_in["kind"] not in EXPECTED_KINDS[args.command]:
                raise ValidationError(
                    f"{args.command} expects kind {' or '.join(EXPECTED_KINDS[args.command])}, got {doc_in['kind']}"
                )
            cache = TermCache.from_env(args.cache_dir)
            outcome = OPERATIONS[args.command](doc_in, args, cache)
            if cache is not None:
                log.info("cache %s", cache.stats())
    except ValidationError as exc:
        print(f"{TOOL}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, IndexError) as exc:
        # domain preconditions that the schema cannot express
        print(f"{TOOL}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RefusedComputation as exc:
        print(f"{TOOL}: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    log.info("%s finished in %.3f s", args.command, time.perf_counter() - start)

    if args.format == "csv":
        if outcome.csv is None:
            print(f"{TOOL}: --format csv is only available for volume", file=sys.stderr)
            return EXIT_INVALID
        sys.stdout.write(outcome.csv)
    else:
        doc = {
            "tool": TOOL,
            "version": __version__,
            "operation": args.command,
            "input_sha256": input_hash(doc_in),
            "seed": args.seed,
            "parameters": _parameters(args),
            "passed": outcome.passed,
            "result": to_json(outcome.result),
        }
        sys.stdout.write(canonical_dumps(doc))
        if args.pretty:
            print(_pretty(doc), file=sys.stderr)
    if not outcome.passed:
        print(f"{TOOL}: property check failed", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
