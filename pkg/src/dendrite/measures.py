"""Rational probability measures on finite trees and the measure-median map.

The median map sends a probability measure to a set of one or two points and
commutes with every homeomorphism of the tree:

* if the measure has atoms, take the atoms of maximal mass and return the
  Jordan center of their (degree-two suppressed) hull;
* otherwise, if some regular points split the mass in halves, those points
  lie on an arc and its extremities are returned;
* otherwise every regular point has a heavy side (mass > 1/2) and the heavy
  sides' closures meet in exactly one point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import subsets as ss
from .subsets import ClosedSet
from .tree import Dendrite, InputError, Interior, Point, Vertex, point_key

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class TreeMeasure:
    """Atoms at points plus a total mass per edge spread uniformly along it."""

    atoms: tuple[tuple[Point, Fraction], ...]
    densities: tuple[tuple[str, Fraction], ...]

    @classmethod
    def make(
        cls,
        X: Dendrite,
        atoms: Mapping[Point, object] | None = None,
        densities: Mapping[str, object] | None = None,
    ) -> "TreeMeasure":
        at: dict[Point, Fraction] = {}
        for p, m in (atoms or {}).items():
            X.check_point(p)
            m = Fraction(m)
            if m <= 0:
                raise InputError(f"atom at {p} has non-positive mass {m}")
            at[p] = at.get(p, Fraction(0)) + m
        de: dict[str, Fraction] = {}
        for e, m in (densities or {}).items():
            if e not in X.edges:
                raise InputError(f"density on unknown edge {e!r}")
            m = Fraction(m)
            if m < 0:
                raise InputError(f"negative density on {e!r}")
            if m:
                de[e] = de.get(e, Fraction(0)) + m
        total = sum(at.values(), Fraction(0)) + sum(de.values(), Fraction(0))
        if total != 1:
            raise InputError(f"total mass is {total}, expected 1")
        return cls(
            tuple(sorted(at.items(), key=lambda kv: point_key(kv[0]))),
            tuple(sorted(de.items())),
        )

    @classmethod
    def dirac(cls, X: Dendrite, p: Point) -> "TreeMeasure":
        return cls.make(X, atoms={p: 1})

    @property
    def has_atoms(self) -> bool:
        return bool(self.atoms)

    def density(self, e: str) -> Fraction:
        return dict(self.densities).get(e, Fraction(0))


def mass_of(X: Dendrite, mu: TreeMeasure, S: ClosedSet) -> Fraction:
    """Exact mass of a closed set; atoms on its boundary count fully."""
    total = sum((m for p, m in mu.atoms if ss.contains(X, S, p)), Fraction(0))
    for e, d in mu.densities:
        total += d * sum((b - a for a, b in S.on_edge(e)), Fraction(0))
    return total


def _beyond_mass(X: Dendrite, mu: TreeMeasure, w: str, blocked: str) -> Fraction:
    """Density mass of the subtree hanging at ``w`` away from edge ``blocked``."""
    _, edges = ss._subtree_beyond(X, w, blocked)
    return sum((mu.density(e) for e in edges), Fraction(0))


def _require_atom_free(mu: TreeMeasure) -> None:
    if mu.has_atoms:
        raise InputError("measure has atoms")


# -- Jordan center ------------------------------------------------------------


def _skeleton(X: Dendrite, H: ClosedSet) -> dict[Point, set[Point]]:
    adj: dict[Point, set[Point]] = {p: set() for p in ss.corner_points(X, H)}
    for e, ivs in H.intervals:
        for a, b in ivs:
            if a < b:
                p, q = X.point(e, a), X.point(e, b)
                adj[p].add(q)
                adj[q].add(p)
    return adj


def _suppress_degree_two(adj: dict[Point, set[Point]]) -> dict[Point, set[Point]]:
    adj = {p: set(ns) for p, ns in adj.items()}
    for p in sorted(adj, key=point_key):
        if len(adj[p]) == 2:
            a, b = adj.pop(p)
            adj[a].discard(p)
            adj[b].discard(p)
            adj[a].add(b)
            adj[b].add(a)
    return adj


def tree_center(adj: dict) -> set:
    """Classical center of a finite tree by simultaneous leaf pruning."""
    alive = {p: set(ns) for p, ns in adj.items()}
    while len(alive) > 2:
        leaves = [p for p, ns in alive.items() if len(ns) <= 1]
        for p in leaves:
            for q in alive.pop(p):
                alive[q].discard(p)
    return set(alive)


def jordan_center(X: Dendrite, A: Iterable[Point]) -> list[Point]:
    """Center of the hull of ``A`` after suppressing degree-two points.

    Metric lengths play no role: pruning works on the combinatorial tree.
    """
    pts = list(A)
    if not pts:
        raise InputError("Jordan center of an empty set")
    H = ss.hull(X, pts)
    adj = _suppress_degree_two(_skeleton(X, H))
    return sorted(tree_center(adj), key=point_key)


# -- atom-free cases ------------------------------------------------------------


def half_points(X: Dendrite, mu: TreeMeasure) -> ClosedSet | None:
    """Hull of the regular points whose two sides both carry mass 1/2."""
    _require_atom_free(mu)
    pieces: list[ClosedSet] = []
    for e, (u, v, _) in X.edges.items():
        d = mu.density(e)
        toward_u = _beyond_mass(X, mu, u, e)
        if d > 0:
            t = (HALF - toward_u) / d
            if 0 < t < 1:
                pieces.append(ss.singleton(X, Interior(e, t)))
        elif toward_u == HALF:
            pieces.append(ss.build(X, (), [(e, 0, 1)]))
    for w in sorted(X.vertices):
        if X.degree(w) == 2:
            e = X.incident(w)[0]
            side = mu.density(e) + _beyond_mass(X, mu, X.other_end(e, w), e)
            if side == HALF:
                pieces.append(ss.build(X, [w]))
    if not pieces:
        return None
    corners = [p for P in pieces for p in ss.corner_points(X, P)]
    return ss.hull(X, corners)


def heavy_component_core(X: Dendrite, mu: TreeMeasure) -> Point:
    """The point common to the closures of all heavy sides of regular points.

    Walks toward the heavy side until no direction carries more than half of
    the mass.  The heavy side never flips inside an edge, since that would
    produce a regular point with a 1/2 split.
    """
    _require_atom_free(mu)
    if half_points(X, mu) is not None:
        raise InputError("measure has half points; the heavy core is undefined")
    w = min(X.vertices)
    came_from = None
    while True:
        step = None
        for e in X.incident(w):
            far = X.other_end(e, w)
            if mu.density(e) + _beyond_mass(X, mu, far, e) > HALF:
                step = (e, far)
                break
        if step is None:
            return Vertex(w)
        if step[0] == came_from:
            raise AssertionError("heavy side walked backwards")
        came_from, w = step


def measure_median(X: Dendrite, mu: TreeMeasure) -> list[Point]:
    """Equivariant set of one or two points attached to ``mu``."""
    if mu.has_atoms:
        top = max(m for _, m in mu.atoms)
        return jordan_center(X, [p for p, m in mu.atoms if m == top])
    E = half_points(X, mu)
    if E is not None:
        ext = ss.extremities(X, E)
        return sorted(ext, key=point_key)
    return [heavy_component_core(X, mu)]


def median_branch(X: Dendrite, mu: TreeMeasure) -> str:
    """Which of the three cases of :func:`measure_median` applies."""
    if mu.has_atoms:
        return "atomic"
    return "half" if half_points(X, mu) is not None else "heavy"
