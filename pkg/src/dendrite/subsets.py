"""Closed subsets of a finite tree and the arc / hull / Helly toolkit.

A :class:`ClosedSet` is a finite union of vertices and closed parameter
intervals on edges.  The canonical form keeps, per edge, sorted disjoint
intervals, always lists every vertex that belongs to the set and drops
intervals that degenerate onto a vertex.  Two values describe the same subset
exactly when their canonical forms are equal.  A sub-dendrite is a nonempty
connected closed set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .tree import Dendrite, Germ, InputError, Interior, Point, Vertex, point_key

Interval = tuple[Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class ClosedSet:
    vertices: frozenset[str]
    intervals: tuple[tuple[str, tuple[Interval, ...]], ...]

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.intervals

    def on_edge(self, e: str) -> tuple[Interval, ...]:
        for eid, ivs in self.intervals:
            if eid == e:
                return ivs
        return ()

    @property
    def full_edges(self) -> frozenset[str]:
        return frozenset(e for e, ivs in self.intervals if ivs == ((ZERO, ONE),))

    @property
    def partial(self) -> dict[str, tuple[Interval, ...]]:
        return {e: ivs for e, ivs in self.intervals if ivs != ((ZERO, ONE),)}

    def __str__(self) -> str:
        parts = [f"v:{v}" for v in sorted(self.vertices)]
        for e, ivs in self.intervals:
            parts += [f"[{e}:{a}..{b}]" for a, b in ivs]
        return "{" + ", ".join(parts) + "}"


EMPTY = ClosedSet(frozenset(), ())


def _merge(ivs: list[Interval]) -> list[Interval]:
    ivs = sorted(ivs)
    out: list[list[Fraction]] = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def build(X: Dendrite, vertices: Iterable[str] = (), intervals: Iterable[tuple] = ()) -> ClosedSet:
    """Canonical closed set from vertices and ``(edge, a, b)`` intervals."""
    verts = set(vertices)
    per_edge: dict[str, list[Interval]] = {}
    for e, a, b in intervals:
        a, b = Fraction(a), Fraction(b)
        if a > b:
            a, b = b, a
        if e not in X.edges or a < 0 or b > 1:
            raise InputError(f"bad interval {e}:{a}..{b}")
        u, v, _ = X.edges[e]
        if a == 0:
            verts.add(u)
        if b == 1:
            verts.add(v)
        if a == b and a in (ZERO, ONE):
            continue
        per_edge.setdefault(e, []).append((a, b))
    for v in verts:
        if v not in X.vertices:
            raise InputError(f"unknown vertex {v!r}")
    items = tuple(sorted((e, tuple(_merge(ivs))) for e, ivs in per_edge.items()))
    return ClosedSet(frozenset(verts), items)


def whole(X: Dendrite) -> ClosedSet:
    return build(X, X.vertices, ((e, 0, 1) for e in X.edges))


def singleton(X: Dendrite, p: Point) -> ClosedSet:
    X.check_point(p)
    if isinstance(p, Vertex):
        return build(X, [p.id])
    return build(X, (), [(p.edge, p.t, p.t)])


def from_points(X: Dendrite, pts: Iterable[Point]) -> ClosedSet:
    return union(X, *(singleton(X, p) for p in pts))


def contains(X: Dendrite, S: ClosedSet, p: Point) -> bool:
    if isinstance(p, Vertex):
        return p.id in S.vertices
    return any(a <= p.t <= b for a, b in S.on_edge(p.edge))


def union(X: Dendrite, *sets: ClosedSet) -> ClosedSet:
    verts: set[str] = set()
    ivs: list[tuple] = []
    for S in sets:
        verts |= S.vertices
        for e, pieces in S.intervals:
            ivs += [(e, a, b) for a, b in pieces]
    return build(X, verts, ivs)


def intersection(X: Dendrite, *sets: ClosedSet) -> ClosedSet:
    if not sets:
        return whole(X)
    acc = sets[0]
    for S in sets[1:]:
        verts = acc.vertices & S.vertices
        ivs = []
        for e, mine in acc.intervals:
            for a, b in mine:
                for c, d in S.on_edge(e):
                    lo, hi = max(a, c), min(b, d)
                    if lo <= hi:
                        ivs.append((e, lo, hi))
        acc = build(X, verts, ivs)
    return acc


def is_subset(X: Dendrite, A: ClosedSet, B: ClosedSet) -> bool:
    return intersection(X, A, B) == A


def complement_closure(X: Dendrite, S: ClosedSet) -> ClosedSet:
    """Closure of ``X - S``."""
    ivs = []
    for e, (u, v, _) in X.edges.items():
        covered = list(S.on_edge(e))
        if u in S.vertices:
            covered.append((ZERO, ZERO))
        if v in S.vertices:
            covered.append((ONE, ONE))
        covered = _merge(covered)
        if not covered:
            ivs.append((e, ZERO, ONE))
            continue
        if covered[0][0] > 0:
            ivs.append((e, ZERO, covered[0][0]))
        for (_, b), (c, _) in zip(covered, covered[1:]):
            ivs.append((e, b, c))
        if covered[-1][1] < 1:
            ivs.append((e, covered[-1][1], ONE))
    return build(X, X.vertices - S.vertices, ivs)


def _pieces(X: Dendrite, S: ClosedSet):
    """Union-find over the atomic pieces of ``S``: vertices and intervals."""
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def join(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)

    for v in S.vertices:
        parent[("v", v)] = ("v", v)
    for e, ivs in S.intervals:
        u, v, _ = X.edges[e]
        for i, (a, b) in enumerate(ivs):
            node = ("i", e, i)
            parent[node] = node
            if a == 0:
                join(node, ("v", u))
            if b == 1:
                join(node, ("v", v))
    return parent, find


def components(X: Dendrite, S: ClosedSet) -> list[ClosedSet]:
    parent, find = _pieces(X, S)
    groups: dict = {}
    for node in parent:
        groups.setdefault(find(node), []).append(node)
    out = []
    for nodes in groups.values():
        verts = [n[1] for n in nodes if n[0] == "v"]
        ivs = []
        for n in nodes:
            if n[0] == "i":
                a, b = S.on_edge(n[1])[n[2]]
                ivs.append((n[1], a, b))
        out.append(build(X, verts, ivs))
    return sorted(out, key=lambda C: point_key(some_point(X, C)))


def is_connected(X: Dendrite, S: ClosedSet) -> bool:
    if S.is_empty:
        return False
    parent, find = _pieces(X, S)
    return len({find(n) for n in parent}) == 1


def corner_points(X: Dendrite, S: ClosedSet) -> list[Point]:
    """Vertices of ``S`` and the endpoints of its intervals, sorted."""
    pts = {Vertex(v) for v in S.vertices}
    for e, ivs in S.intervals:
        for a, b in ivs:
            pts.add(X.point(e, a))
            pts.add(X.point(e, b))
    return sorted(pts, key=point_key)


def sample_points(X: Dendrite, S: ClosedSet) -> list[Point]:
    """Corner points plus one interior point of every interval."""
    pts = set(corner_points(X, S))
    for e, ivs in S.intervals:
        for a, b in ivs:
            if a < b:
                pts.add(X.point(e, (a + b) / 2))
    return sorted(pts, key=point_key)


def some_point(X: Dendrite, S: ClosedSet) -> Point:
    if S.is_empty:
        raise InputError("empty set has no points")
    return corner_points(X, S)[0]


def as_point(X: Dendrite, S: ClosedSet) -> Point:
    pts = corner_points(X, S)
    if len(pts) != 1:
        raise InputError(f"set {S} is not a single point")
    return pts[0]


def order_in(X: Dendrite, S: ClosedSet, p: Point) -> int:
    """Number of directions at ``p`` along which ``S`` leaves ``p``."""
    if not contains(X, S, p):
        return 0
    if isinstance(p, Interior):
        return sum(1 for a, b in S.on_edge(p.edge) if a <= p.t <= b and a < p.t) + sum(
            1 for a, b in S.on_edge(p.edge) if a <= p.t <= b and b > p.t
        )
    count = 0
    for e in X.incident(p.id):
        u = X.edges[e][0]
        for a, b in S.on_edge(e):
            if (u == p.id and a == 0) or (u != p.id and b == 1):
                count += 1
                break
    return count


def extremities(X: Dendrite, S: ClosedSet) -> list[Point]:
    """Points of order at most 1 within ``S`` (the end points of ``S``)."""
    return [p for p in corner_points(X, S) if order_in(X, S, p) <= 1]


# -- arcs and hulls ---------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    endpoints: tuple[Point, Point]
    carrier: ClosedSet


def _route_set(X: Dendrite, x: Point, y: Point) -> list[tuple]:
    return [(s.edge, s.a, s.b) for s in X.route(x, y)]


def arc(X: Dendrite, x: Point, y: Point) -> Arc:
    segs = _route_set(X, x, y)
    carrier = build(X, [p.id for p in (x, y) if isinstance(p, Vertex)], segs)
    if x == y:
        carrier = singleton(X, x)
    return Arc((x, y), carrier)


def hull(X: Dendrite, points: Iterable[Point]) -> ClosedSet:
    """Smallest closed connected set containing ``points``."""
    pts = list(points)
    if not pts:
        raise InputError("hull of an empty set")
    base = pts[0]
    segs = []
    for p in pts[1:]:
        segs += _route_set(X, base, p)
    verts = [p.id for p in pts if isinstance(p, Vertex)]
    ivs = segs + [(p.edge, p.t, p.t) for p in pts if isinstance(p, Interior)]
    return build(X, verts, ivs)


def median(X: Dendrite, p: Point, q: Point, r: Point) -> Point:
    """The unique point common to the three arcs between ``p, q, r``."""
    core = intersection(X, arc(X, p, q).carrier, arc(X, q, r).carrier, arc(X, r, p).carrier)
    return as_point(X, core)


# -- components -------------------------------------------------------------


def _subtree_beyond(X: Dendrite, start: str, blocked_edge: str) -> tuple[set[str], set[str]]:
    verts, edges = {start}, set()
    stack = [start]
    while stack:
        w = stack.pop()
        for e in X.incident(w):
            if e == blocked_edge or e in edges:
                continue
            edges.add(e)
            x = X.other_end(e, w)
            if x not in verts:
                verts.add(x)
                stack.append(x)
    return verts, edges


def component_closure(X: Dendrite, p: Point, germ: Germ) -> ClosedSet:
    """Closure of the component of ``X - {p}`` leaving ``p`` along ``germ``."""
    u, v, _ = X.edges[germ.edge]
    if isinstance(p, Vertex):
        if germ.edge not in X.incident(p.id):
            raise InputError(f"germ {germ} is not at {p}")
        far = X.other_end(germ.edge, p.id)
        verts, edges = _subtree_beyond(X, far, germ.edge)
        return build(X, verts | {p.id}, [(e, 0, 1) for e in edges | {germ.edge}])
    if germ.edge != p.edge:
        raise InputError(f"germ {germ} is not at {p}")
    if germ.sign > 0:
        verts, edges = _subtree_beyond(X, v, germ.edge)
        return build(X, verts, [(e, 0, 1) for e in edges] + [(p.edge, p.t, 1)])
    verts, edges = _subtree_beyond(X, u, germ.edge)
    return build(X, verts, [(e, 0, 1) for e in edges] + [(p.edge, 0, p.t)])


def components_minus(X: Dendrite, p: Point) -> list[tuple[Germ, ClosedSet]]:
    """Closures of the components of ``X - {p}``, tagged by their germ at ``p``."""
    X.check_point(p)
    return [(g, component_closure(X, p, g)) for g in X.germs_at(p)]


def u_side(X: Dendrite, s: Point, t: Point) -> ClosedSet:
    """Closure of the component of ``X - {s}`` that contains ``t``."""
    if s == t:
        raise InputError("u_side needs s != t")
    return component_closure(X, s, X.germ_toward(s, t))


# -- Helly and friends --------------------------------------------------------


def helly_intersection(X: Dendrite, family: Sequence[ClosedSet]) -> ClosedSet | None:
    """Exact intersection of ``family``; ``None`` stands for the empty set."""
    if not family:
        raise InputError("empty family")
    core = intersection(X, *family)
    return None if core.is_empty else core


def square_reduction(X: Dendrite, z: Sequence[ClosedSet]) -> tuple[str, Point]:
    """For four cyclically meeting sub-dendrites return ``012`` or ``123``.

    The returned witness lies in the three named sets.  When both triples
    meet, ``012`` wins.
    """
    if len(z) != 4:
        raise InputError("square_reduction takes four sets")
    for i in range(4):
        if intersection(X, z[i], z[(i + 1) % 4]).is_empty:
            raise InputError(f"z{i} and z{(i + 1) % 4} do not meet")
    for tag, idx in (("012", (0, 1, 2)), ("123", (1, 2, 3))):
        core = intersection(X, *(z[i] for i in idx))
        if not core.is_empty:
            return tag, some_point(X, core)
    raise AssertionError("square lemma violated")  # unreachable on a tree


def first_point_retraction(X: Dendrite, Y: ClosedSet, p: Point) -> Point:
    """The point of ``Y`` through which every arc from ``p`` enters ``Y``."""
    if Y.is_empty:
        raise InputError("retraction onto the empty set")
    if contains(X, Y, p):
        return p
    target = some_point(X, Y)
    meet = intersection(X, arc(X, p, target).carrier, Y)
    return min(corner_points(X, meet), key=lambda q: (X.distance(p, q), point_key(q)))


def distance_to_set(X: Dendrite, p: Point, Y: ClosedSet) -> Fraction:
    return X.distance(p, first_point_retraction(X, Y, p))


def hausdorff(X: Dendrite, A: ClosedSet, B: ClosedSet) -> Fraction:
    """Hausdorff distance; distance to a subtree is convex along edges, so
    corner points realise the supremum."""
    one = max(distance_to_set(X, a, B) for a in corner_points(X, A))
    two = max(distance_to_set(X, b, A) for b in corner_points(X, B))
    return max(one, two)


def hausdorff_points(X: Dendrite, A: Sequence[Point], B: Sequence[Point]) -> Fraction:
    one = max(min(X.distance(a, b) for b in B) for a in A)
    two = max(min(X.distance(a, b) for a in A) for b in B)
    return max(one, two)
