"""JSON documents: input schema, domain-type codecs and canonical output.

Exact values are always strings ``"p/q"`` (or ``"p"``, or ``"inf"``); floats
appear only in volume-experiment outputs.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

import jsonschema

from .errors import ValidationError
from .kiselman import ToricPsh
from .lct import ThresholdResult
from .monomial import MonomialIdeal
from .polyhedron import NewtonPolyhedron
from .rational import INF, Infinity, format_rational, parse_rational
from .report import Report
from .sequences import (
    ExplicitTerms,
    GradedSequence,
    MultiplierFamily,
    PowerFamily,
    SubadditiveSequence,
    ValuationFamily,
)
from .valuation import MonomialValuation

RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$"},
    ]
}
NONNEG_INT = {"type": "integer", "minimum": 0}
EXPONENT = {"type": "array", "items": NONNEG_INT, "minItems": 1}
GENERATORS = {"type": "array", "items": EXPONENT}
WEIGHTS = {"type": "array", "items": RATIONAL, "minItems": 1}
PIECES = {
    "type": "array",
    "minItems": 1,
    "items": {
        "type": "object",
        "properties": {"c": WEIGHTS, "d": RATIONAL},
        "required": ["c"],
        "additionalProperties": False,
    },
}
GRADED_PRESENTATION = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"type": {"const": "power"}, "generators": GENERATORS},
            "required": ["type", "generators"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"type": {"const": "valuation"}, "weights": WEIGHTS, "threshold": RATIONAL},
            "required": ["type", "weights"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "explicit"},
                "terms": {"type": "array", "items": GENERATORS, "minItems": 1},
            },
            "required": ["type", "terms"],
            "additionalProperties": False,
        },
    ]
}
PSH_SOURCE = {
    "type": "object",
    "properties": {"type": {"const": "toric_psh"}, "pieces": PIECES},
    "required": ["type", "pieces"],
    "additionalProperties": False,
}
SUBADDITIVE_PRESENTATION = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"type": {"const": "multiplier"}, "source": {"oneOf": [GRADED_PRESENTATION, PSH_SOURCE]}},
            "required": ["type", "source"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "type": {"const": "explicit"},
                "terms": {"type": "array", "items": GENERATORS, "minItems": 1},
            },
            "required": ["type", "terms"],
            "additionalProperties": False,
        },
    ]
}
VALUATION_LIST = {"type": "array", "items": WEIGHTS}


def _kind(name, props, required=()):
    return {
        "type": "object",
        "properties": {"kind": {"const": name}, "dim": {"type": "integer", "minimum": 1}, **props},
        "required": ["kind", "dim", *required],
        "additionalProperties": False,
    }


SCHEMA = {
    "oneOf": [
        _kind("ideal", {"generators": GENERATORS, "q": GENERATORS, "c": RATIONAL}, ["generators"]),
        _kind("valuation", {"weights": WEIGHTS, "ideal": GENERATORS, "threshold": RATIONAL}, ["weights"]),
        _kind(
            "graded_sequence",
            {"presentation": GRADED_PRESENTATION, "q": GENERATORS, "valuations": VALUATION_LIST},
            ["presentation"],
        ),
        _kind(
            "subadditive_sequence",
            {"presentation": SUBADDITIVE_PRESENTATION, "q": GENERATORS, "valuations": VALUATION_LIST},
            ["presentation"],
        ),
        _kind(
            "toric_psh",
            {"pieces": PIECES, "q": GENERATORS, "valuations": VALUATION_LIST, "psi": PIECES},
            ["pieces"],
        ),
        _kind(
            "experiment",
            {
                "pieces": PIECES,
                "q": GENERATORS,
                "lambda": RATIONAL,
                "diagnostic": {"type": "boolean"},
                "r_min": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "r_max": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "points": {"type": "integer", "minimum": 3},
                "method": {"enum": ["auto", "quadrature", "monte-carlo"]},
            },
            ["pieces"],
        ),
    ]
}


def validate_document(doc) -> dict:
    if not isinstance(doc, dict):
        raise ValidationError("a problem document must be a JSON object")
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        # oneOf errors are vague; report against the branch matching `kind`
        kind = doc.get("kind")
        for branch in SCHEMA["oneOf"]:
            if branch["properties"]["kind"]["const"] == kind:
                try:
                    jsonschema.validate(doc, branch)
                except jsonschema.ValidationError as inner:
                    raise ValidationError(f"{kind}: {inner.message}") from None
        raise ValidationError(f"invalid document: {exc.message}") from None
    return doc


# -- codecs ------------------------------------------------------------------


def ideal_from(gens, dim) -> MonomialIdeal:
    try:
        return MonomialIdeal(dim, tuple(tuple(g) for g in gens))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def valuation_from(weights, dim=None) -> MonomialValuation:
    try:
        v = MonomialValuation(tuple(parse_rational(w) for w in weights))
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from None
    if dim is not None and v.dim != dim:
        raise ValidationError(f"valuation has {v.dim} weights, expected {dim}")
    return v


def psh_from(pieces, dim) -> ToricPsh:
    try:
        return ToricPsh(dim, tuple((tuple(parse_rational(x) for x in p["c"]), parse_rational(p.get("d", "0"))) for p in pieces))
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc)) from None


def graded_presentation_from(p, dim):
    t = p["type"]
    try:
        if t == "power":
            return PowerFamily(ideal_from(p["generators"], dim))
        if t == "valuation":
            return ValuationFamily(valuation_from(p["weights"], dim), parse_rational(p.get("threshold", "1")))
        return ExplicitTerms(tuple(ideal_from(g, dim) for g in p["terms"]))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def graded_from(p, dim, validate=True, cache=None) -> GradedSequence:
    try:
        return GradedSequence(graded_presentation_from(p, dim), validate=validate, cache=cache)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def subadditive_from(p, dim, validate=True, cache=None) -> SubadditiveSequence:
    from .kiselman import demailly_sequence
    from .sequences import multiplier_family

    try:
        if p["type"] == "multiplier":
            src = p["source"]
            if src["type"] == "toric_psh":
                return demailly_sequence(psh_from(src["pieces"], dim), cache=cache)
            return multiplier_family(graded_from(src, dim), cache=cache)
        return SubadditiveSequence(
            ExplicitTerms(tuple(ideal_from(g, dim) for g in p["terms"])), validate=validate, cache=cache
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def to_json(x):
    """Domain value -> JSON-compatible data (exact values as strings)."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (Fraction, Infinity)):
        return format_rational(x)
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, MonomialIdeal):
        return {"kind": "ideal", "dim": x.dim, "generators": [list(g) for g in x.generators]}
    if isinstance(x, MonomialValuation):
        return {"kind": "valuation", "dim": x.dim, "weights": [format_rational(a) for a in x.weights]}
    if isinstance(x, NewtonPolyhedron):
        return {"kind": "polyhedron", "dim": x.dim, "points": [[format_rational(a) for a in p] for p in x.points]}
    if isinstance(x, ToricPsh):
        return {"kind": "toric_psh", "dim": x.dim, **{"pieces": x.describe()["pieces"]}}
    if isinstance(x, GradedSequence):
        return {"kind": "graded_sequence", "dim": x.dim, "presentation": x.presentation.describe()}
    if isinstance(x, SubadditiveSequence):
        return {"kind": "subadditive_sequence", "dim": x.dim, "presentation": _sub_describe(x.presentation)}
    if isinstance(x, ThresholdResult):
        return {
            "value": format_rational(x.value),
            "witness": None if x.witness is None else [format_rational(a) for a in x.witness.weights],
            "dual_certificate": None if x.dual_certificate is None else [format_rational(a) for a in x.dual_certificate],
            "q_generator": None if x.generator is None else list(x.generator),
        }
    if isinstance(x, Report):
        return {
            "name": x.name,
            "passed": x.passed,
            "checks": x.checks,
            "failures": to_json(x.failures[:20]),
            "failure_count": len(x.failures),
            "details": to_json({k: v for k, v in x.details.items() if k != "certificate"}),
        }
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _sub_describe(p):
    if isinstance(p, MultiplierFamily):
        src = p.source
        if isinstance(src, ToricPsh):
            return {"type": "multiplier", "source": src.describe()}
        if src is not None:
            return {"type": "multiplier", "source": src.describe()}
        raise TypeError("multiplier family without a serializable source")
    return p.describe()


def from_json(obj):
    """Inverse of :func:`to_json` for domain types carrying a ``kind``."""
    kind = obj["kind"]
    dim = obj["dim"]
    if kind == "ideal":
        return ideal_from(obj["generators"], dim)
    if kind == "valuation":
        return valuation_from(obj["weights"], dim)
    if kind == "polyhedron":
        return NewtonPolyhedron(dim, tuple(tuple(parse_rational(a) for a in p) for p in obj["points"]))
    if kind == "toric_psh":
        return psh_from(obj["pieces"], dim)
    if kind == "graded_sequence":
        return graded_from(obj["presentation"], dim)
    if kind == "subadditive_sequence":
        return subadditive_from(obj["presentation"], dim)
    raise ValidationError(f"unknown kind {kind!r}")


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def input_hash(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


__all__ = [
    "INF",
    "validate_document",
    "to_json",
    "from_json",
    "canonical_dumps",
    "input_hash",
]
