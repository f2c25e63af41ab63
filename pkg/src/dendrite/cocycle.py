"""The alternating cocycle on pairs of directions above branch points.

For points ``p, q`` the function ``alpha(p, q)`` is +1 at ``(x, c, c')`` when
``x`` lies strictly inside the arc ``[p, q]``, ``c`` is the direction at ``x``
toward ``p`` and ``c'`` the direction toward ``q``; it is -1 with the roles
swapped and 0 elsewhere.  ``omega = alpha(p,q) + alpha(q,r) + alpha(r,p)``.

Values are sparse.  Only germ-ordered entries (first germ smaller) are
stored; the other orientation is recovered by sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import subsets as ss
from .tree import Dendrite, Germ, InputError, Point, point_key

Key = tuple[Point, Germ, Germ]


def _germ_key(g: Germ) -> tuple:
    return (g.edge, g.sign)


def _entry_key(k: Key) -> tuple:
    return (point_key(k[0]), _germ_key(k[1]), _germ_key(k[2]))


@dataclass(frozen=True)
class CocycleValue:
    entries: tuple[tuple[Key, Fraction], ...] = field(default=())

    @classmethod
    def from_dict(cls, d: dict[Key, Fraction]) -> "CocycleValue":
        acc: dict[Key, Fraction] = {}
        for (x, c, c2), val in d.items():
            if c == c2:
                continue
            if _germ_key(c) > _germ_key(c2):
                c, c2, val = c2, c, -val
            acc[(x, c, c2)] = acc.get((x, c, c2), Fraction(0)) + Fraction(val)
        items = [(k, v) for k, v in acc.items() if v != 0]
        return cls(tuple(sorted(items, key=lambda kv: _entry_key(kv[0]))))

    def as_dict(self) -> dict[Key, Fraction]:
        return dict(self.entries)

    def __call__(self, x: Point, c: Germ, c2: Germ) -> Fraction:
        d = self.as_dict()
        if _germ_key(c) <= _germ_key(c2):
            return d.get((x, c, c2), Fraction(0))
        return -d.get((x, c2, c), Fraction(0))

    def __add__(self, other: "CocycleValue") -> "CocycleValue":
        d = self.as_dict()
        for k, v in other.entries:
            d[k] = d.get(k, Fraction(0)) + v
        return CocycleValue.from_dict(d)

    def __neg__(self) -> "CocycleValue":
        return CocycleValue(tuple((k, -v) for k, v in self.entries))

    def __sub__(self, other: "CocycleValue") -> "CocycleValue":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.entries

    def support_size(self) -> int:
        """Number of nonzero ordered pairs ``(x, c, c')``; each stored entry
        accounts for both orientations."""
        return 2 * len(self.entries)

    def full_entries(self) -> dict[Key, Fraction]:
        out = {}
        for (x, c, c2), v in self.entries:
            out[(x, c, c2)] = v
            out[(x, c2, c)] = -v
        return out

    def bases(self) -> set[Point]:
        return {k[0] for k, _ in self.entries}


ZERO_VALUE = CocycleValue()


def _pair_value(X: Dendrite, x: Point, p: Point, q: Point) -> dict[Key, Fraction]:
    return {(x, X.germ_toward(x, p), X.germ_toward(x, q)): Fraction(1)}


def alpha(X: Dendrite, p: Point, q: Point) -> CocycleValue:
    """``alpha(p, q)`` restricted to pairs of directions above branch points."""
    if p == q:
        return ZERO_VALUE
    carrier = ss.arc(X, p, q).carrier
    acc: dict[Key, Fraction] = {}
    for b in X.branch_vertices():
        if b in (p, q) or not ss.contains(X, carrier, b):
            continue
        acc.update(_pair_value(X, b, p, q))
    return CocycleValue.from_dict(acc)


def omega(X: Dendrite, p: Point, q: Point, r: Point) -> CocycleValue:
    """``alpha(p,q) + alpha(q,r) + alpha(r,p)`` over the branch points."""
    return alpha(X, p, q) + alpha(X, q, r) + alpha(X, r, p)


def omega_direct(X: Dendrite, p: Point, q: Point, r: Point) -> CocycleValue:
    """``omega`` evaluated only above the median, where its support lives.

    Returns the restriction to branch points, so it agrees with
    :func:`omega` entry by entry.
    """
    full = omega_full_at_median(X, p, q, r)
    return CocycleValue(tuple((k, v) for k, v in full.entries if X.order(k[0]) >= 3))


def omega_full_at_median(X: Dendrite, p: Point, q: Point, r: Point) -> CocycleValue:
    """``omega`` on the whole double bundle, evaluated at the median point.

    The median may be a regular point; then the value is invisible to the
    branch-point restriction.
    """
    m = ss.median(X, p, q, r)
    acc: dict[Key, Fraction] = {}
    for a, b in ((p, q), (q, r), (r, p)):
        if m in (a, b):
            continue
        for k, v in _pair_value(X, m, a, b).items():
            acc[k] = acc.get(k, Fraction(0)) + v
    return CocycleValue.from_dict(acc)


def lp_norm(v: CocycleValue, p) -> Fraction | float:
    """l^p norm over ordered direction pairs.

    Exact (a Fraction) for ``p = 1`` and ``p = inf``.  For other ``p`` the
    exact quantity is :func:`lp_power_sum`; its ``1/p`` power is returned as a
    float.
    """
    if p == math.inf or p == "inf":
        return max((abs(x) for x in v.full_entries().values()), default=Fraction(0))
    p = Fraction(p)
    if p < 1:
        raise InputError(f"l^p norm needs p >= 1, got {p}")
    if p == 1:
        return sum((abs(x) for x in v.full_entries().values()), Fraction(0))
    return float(lp_power_sum(v, p)) ** (1 / float(p))


def lp_power_sum(v: CocycleValue, p) -> Fraction:
    """``sum |v|^p``; exact whenever every ``|v|^p`` is rational (always for
    integer ``p`` and for values in ``{-1, 0, 1}``)."""
    p = Fraction(p)
    values = [abs(x) for x in v.full_entries().values()]
    if p.denominator == 1:
        return sum((x ** int(p) for x in values), Fraction(0))
    if all(x == 1 for x in values):
        return Fraction(len(values))
    raise InputError("power sum is not rational for this exponent")


def cocycle_identity_check(X: Dendrite, p: Point, q: Point, r: Point, s: Point) -> bool:
    """Homogeneous cocycle relation for ``omega`` at four points."""
    total = omega(X, q, r, s) - omega(X, p, r, s) + omega(X, p, q, s) - omega(X, p, q, r)
    return total.is_zero()


def coboundary_check(X: Dendrite, p: Point, q: Point, r: Point) -> bool:
    """``omega`` computed at the median agrees with the coboundary of ``alpha``."""
    return omega(X, p, q, r) == omega_direct(X, p, q, r)


def in_common_arc(X: Dendrite, p: Point, q: Point, r: Point) -> bool:
    """Whether one of the three points lies on the arc between the other two."""
    return any(
        ss.contains(X, ss.arc(X, a, b).carrier, c) for a, b, c in ((p, q, r), (q, r, p), (r, p, q))
    )


def nonvanishing_check(X: Dendrite, p: Point, q: Point, r: Point) -> bool:
    """Whether ``omega(p, q, r)`` is nonzero on the full double bundle."""
    return not omega_full_at_median(X, p, q, r).is_zero()


def transport(
    v: CocycleValue,
    point_map: Callable[[Point], Point],
    germ_map: Callable[[Point, Germ], Germ],
) -> CocycleValue:
    """Push a cocycle value along a homeomorphism given on points and germs."""
    d = {}
    for (x, c, c2), val in v.entries:
        d[(point_map(x), germ_map(x, c), germ_map(x, c2))] = val
    return CocycleValue.from_dict(d)


def format_value(v: CocycleValue) -> list[str]:
    return [f"entry\t{x}\t{c}\t{c2}\t{_frac(val)}" for (x, c, c2), val in v.entries]


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
