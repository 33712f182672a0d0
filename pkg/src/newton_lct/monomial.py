"""Monomial ideals stored as minimal antichains of exponent vectors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable

import numpy as np


def _check_dims(points, dim=None):
    for p in points:
        if dim is None:
            dim = len(p)
        elif len(p) != dim:
            raise ValueError(f"dimension mismatch: expected {dim}, got {len(p)}")
    return dim


def dominates(u, v) -> bool:
    """u <= v componentwise."""
    return all(a <= b for a, b in zip(u, v))


def canonical_key(u):
    """Graded-lex order: total degree first, then lexicographically larger first."""
    return (sum(u), tuple(-a for a in u))


def minimalize(points: Iterable) -> tuple:
    """The <=-minimal elements of ``points`` in canonical order."""
    pts = {tuple(p) for p in points}
    _check_dims(pts)
    # a point can only be dominated by one of no larger total degree
    ordered = sorted(pts, key=canonical_key)
    if len(ordered) > 64 and all(type(a) is int and 0 <= a < 1 << 62 for p in ordered for a in p):
        return _minimalize_int(ordered)
    kept = []
    for p in ordered:
        if not any(dominates(q, p) for q in kept):
            kept.append(p)
    return tuple(kept)


def _minimalize_int(ordered) -> tuple:
    arr = np.array(ordered, dtype=np.int64)
    kept = np.empty_like(arr)
    k = 0
    out = []
    for p, row in zip(ordered, arr):
        if k and (kept[:k] <= row).all(axis=1).any():
            continue
        kept[k] = row
        k += 1
        out.append(p)
    return tuple(out)


@dataclass(frozen=True)
class MonomialIdeal:
    dim: int
    generators: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        gens = []
        for g in self.generators:
            g = tuple(g)
            if len(g) != self.dim:
                raise ValueError(f"dimension mismatch: expected {self.dim}, got {len(g)}")
            if any(int(a) != a or a < 0 for a in g):
                raise ValueError(f"generator {g} is not a nonnegative integer vector")
            gens.append(tuple(int(a) for a in g))
        object.__setattr__(self, "generators", minimalize(gens))

    @classmethod
    def of(cls, *generators, dim=None):
        if dim is None:
            if not generators:
                raise ValueError("dimension required for the zero ideal")
            dim = len(generators[0])
        return cls(dim, tuple(generators))

    @classmethod
    def zero(cls, dim):
        return cls(dim, ())

    @classmethod
    def unit(cls, dim):
        return cls(dim, ((0,) * dim,))

    @classmethod
    def maximal(cls, dim):
        return cls(dim, tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return self.generators == ((0,) * self.dim,)

    def contains(self, monomial) -> bool:
        monomial = tuple(monomial)
        if len(monomial) != self.dim:
            raise ValueError("dimension mismatch")
        return any(dominates(g, monomial) for g in self.generators)

    def non_member(self, other: "MonomialIdeal"):
        """A generator of ``other`` outside ``self``, or None when other is contained."""
        _same_dim(self, other)
        for g in other.generators:
            if not self.contains(g):
                return g
        return None

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        return self.non_member(other) is None

    def __mul__(self, other):
        return ideal_product(self, other)

    def __add__(self, other):
        return ideal_sum(self, other)

    def __pow__(self, k):
        return ideal_power(self, k)

    def __str__(self):
        if self.is_zero:
            return "(0)"
        return "(" + ", ".join(monomial_str(g) for g in self.generators) + ")"


def monomial_str(u) -> str:
    names = "xyzw" if len(u) <= 4 else None
    parts = []
    for i, a in enumerate(u):
        if a == 0:
            continue
        v = names[i] if names else f"x{i + 1}"
        parts.append(v if a == 1 else f"{v}^{a}")
    return "*".join(parts) or "1"


def _same_dim(a, b):
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def ideal_product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _same_dim(a, b)
    return MonomialIdeal(
        a.dim, tuple(tuple(x + y for x, y in zip(u, v)) for u, v in _cartesian(a.generators, b.generators))
    )


def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _same_dim(a, b)
    return MonomialIdeal(a.dim, a.generators + b.generators)


def ideal_power(a: MonomialIdeal, k: int) -> MonomialIdeal:
    if k < 1 or int(k) != k:
        raise ValueError("power must be a positive integer")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else ideal_product(result, base)
        k >>= 1
        if k:
            base = ideal_product(base, base)
    return result


def lattice_minimal_points(member, dim: int, bound: int) -> tuple:
    """Minimal elements of an up-closed subset S of Z^dim_{>=0}.

    ``member`` decides S. Only minimal elements lying in the box [0, bound]^dim
    are reported, so ``bound`` must dominate every minimal element. The last
    coordinate is found by binary search per prefix, capped by the values already
    found for the prefix's lower neighbours.
    """
    if bound < 0:
        return ()
    cache = {}

    def ask(p):
        r = cache.get(p)
        if r is None:
            r = cache[p] = bool(member(p))
        return r

    if dim == 1:
        if not ask((bound,)):
            return ()
        lo, hi = 0, bound
        while lo < hi:
            mid = (lo + hi) // 2
            if ask((mid,)):
                hi = mid
            else:
                lo = mid + 1
        return ((lo,),)

    last = {}  # prefix -> least last coordinate in S, None if none within the box
    out = []
    for prefix in _cartesian(range(bound + 1), repeat=dim - 1):
        upper = bound
        lower_known = []
        for k in range(dim - 1):
            if prefix[k]:
                q = prefix[:k] + (prefix[k] - 1,) + prefix[k + 1 :]
                t = last[q]
                lower_known.append(t)
                if t is not None and t < upper:
                    upper = t
        capped = any(t is not None for t in lower_known)
        if not capped and not ask(prefix + (upper,)):
            last[prefix] = None
            continue
        lo, hi = 0, upper
        while lo < hi:
            mid = (lo + hi) // 2
            if ask(prefix + (mid,)):
                hi = mid
            else:
                lo = mid + 1
        last[prefix] = lo
        if all(t is None or lo < t for t in lower_known):
            out.append(prefix + (lo,))
    return minimalize(out)


def box_points(bounds):
    return _cartesian(*(range(int(b) + 1) for b in bounds))


def fraction_vector(v) -> tuple:
    return tuple(Fraction(a) for a in v)
