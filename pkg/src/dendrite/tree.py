"""Finite metric trees and the points living on them.

A :class:`Dendrite` is a finite tree whose edges carry positive rational
lengths.  Every edge ``e = (u, v)`` is parametrised by ``t in [0, 1]`` with
``t = 0`` at ``u`` and ``t = 1`` at ``v``.  Points are either vertices or
interior edge points; parameters 0 and 1 are always folded into the vertex
form so that point equality is structural.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union


class InputError(ValueError):
    """Raised for malformed inputs (bad points, invalid trees, parse errors)."""


@dataclass(frozen=True)
class Vertex:
    id: str

    def __str__(self) -> str:
        return f"v:{self.id}"


@dataclass(frozen=True)
class Interior:
    edge: str
    t: Fraction

    def __post_init__(self) -> None:
        if not 0 < self.t < 1:
            raise InputError(f"interior parameter {self.t} not in (0, 1)")

    def __str__(self) -> str:
        return f"e:{self.edge}:{self.t.numerator}/{self.t.denominator}"


Point = Union[Vertex, Interior]


def point_key(p: Point) -> tuple:
    """Total order on points, used wherever output must be deterministic."""
    if isinstance(p, Vertex):
        return (0, p.id, Fraction(0))
    return (1, p.edge, p.t)


@dataclass(frozen=True)
class Germ:
    """A direction at a point: an edge plus the sense of travel along it.

    ``sign = +1`` means moving along the edge with increasing parameter.
    At a vertex, each incident edge yields exactly one germ; at an interior
    point both senses of its own edge are germs.
    """

    edge: str
    sign: int

    def __str__(self) -> str:
        return f"{self.edge}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class Segment:
    """Piece of a route: travel along ``edge`` from parameter ``a`` to ``b``."""

    edge: str
    a: Fraction
    b: Fraction


class Dendrite:
    """A finite metric tree with rational edge lengths.

    ``edges`` maps an edge id to ``(u, v, length)``.  Instances are treated as
    immutable; derived tables are cached on first use.
    """

    def __init__(self, vertices: Iterable[str], edges: Mapping[str, tuple]):
        verts = list(vertices)
        if not verts:
            raise InputError("a dendrite needs at least one vertex")
        if len(set(verts)) != len(verts):
            raise InputError("duplicate vertex identifiers")
        self.vertices: frozenset[str] = frozenset(verts)
        table: dict[str, tuple[str, str, Fraction]] = {}
        for eid, (u, v, length) in edges.items():
            if eid in self.vertices:
                raise InputError(f"edge id {eid!r} clashes with a vertex id")
            length = Fraction(length)
            if length <= 0:
                raise InputError(f"edge {eid!r} has non-positive length {length}")
            if u not in self.vertices or v not in self.vertices:
                raise InputError(f"edge {eid!r} uses an unknown vertex")
            if u == v:
                raise InputError(f"edge {eid!r} is a loop")
            table[eid] = (u, v, length)
        self.edges: dict[str, tuple[str, str, Fraction]] = table
        if len(table) != len(self.vertices) - 1 or not self._connected():
            raise InputError("edges do not form a tree")

    def _connected(self) -> bool:
        root = min(self.vertices)
        seen = {root}
        stack = [root]
        while stack:
            w = stack.pop()
            for e in self.incident(w):
                x = self.other_end(e, w)
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return len(seen) == len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dendrite):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, tuple(sorted(self.edges.items()))))

    def __repr__(self) -> str:
        return f"Dendrite({len(self.vertices)} vertices, {len(self.edges)} edges)"

    # -- adjacency ---------------------------------------------------------

    @cached_property
    def _incidence(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for eid, (u, v, _) in self.edges.items():
            inc[u].append(eid)
            inc[v].append(eid)
        return {v: tuple(sorted(es)) for v, es in inc.items()}

    def incident(self, v: str) -> tuple[str, ...]:
        return self._incidence[v]

    def degree(self, v: str) -> int:
        return len(self._incidence[v])

    def ends_of(self, e: str) -> tuple[str, str]:
        u, v, _ = self.edges[e]
        return u, v

    def length(self, e: str) -> Fraction:
        return self.edges[e][2]

    def other_end(self, e: str, v: str) -> str:
        a, b, _ = self.edges[e]
        return b if v == a else a

    def edge_between(self, u: str, v: str) -> str | None:
        for e in self._incidence[u]:
            if self.other_end(e, u) == v:
                return e
        return None

    def germ_from_vertex(self, v: str, e: str) -> Germ:
        return Germ(e, 1 if self.edges[e][0] == v else -1)

    # -- points ------------------------------------------------------------

    def point(self, edge: str, t) -> Point:
        """Canonical point at parameter ``t`` of ``edge``."""
        t = Fraction(t)
        if edge not in self.edges:
            raise InputError(f"unknown edge {edge!r}")
        if t == 0:
            return Vertex(self.edges[edge][0])
        if t == 1:
            return Vertex(self.edges[edge][1])
        if not 0 < t < 1:
            raise InputError(f"parameter {t} outside [0, 1]")
        return Interior(edge, t)

    def check_point(self, p: Point) -> Point:
        if isinstance(p, Vertex):
            if p.id not in self.vertices:
                raise InputError(f"vertex {p.id!r} not in tree")
        elif isinstance(p, Interior):
            if p.edge not in self.edges:
                raise InputError(f"edge {p.edge!r} not in tree")
        else:
            raise InputError(f"not a point: {p!r}")
        return p

    def germs_at(self, p: Point) -> list[Germ]:
        if isinstance(p, Vertex):
            return [self.germ_from_vertex(p.id, e) for e in self.incident(p.id)]
        return [Germ(p.edge, -1), Germ(p.edge, 1)]

    # -- paths -------------------------------------------------------------

    @cached_property
    def _rooting(self) -> tuple[dict[str, str | None], dict[str, str | None], dict[str, int]]:
        root = min(self.vertices)
        parent: dict[str, str | None] = {root: None}
        parent_edge: dict[str, str | None] = {root: None}
        depth = {root: 0}
        queue = deque([root])
        while queue:
            w = queue.popleft()
            for e in self.incident(w):
                x = self.other_end(e, w)
                if x not in parent:
                    parent[x] = w
                    parent_edge[x] = e
                    depth[x] = depth[w] + 1
                    queue.append(x)
        return parent, parent_edge, depth

    def vertex_path(self, u: str, v: str) -> list[str]:
        """Vertices on the path from ``u`` to ``v``, both included."""
        parent, _, depth = self._rooting
        left, right = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            left.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            right.append(b)
        while a != b:
            a = parent[a]
            b = parent[b]
            left.append(a)
            right.append(b)
        right.pop()
        return left + right[::-1]

    def _vertex_segments(self, u: str, v: str) -> list[Segment]:
        path = self.vertex_path(u, v)
        segs = []
        for a, b in zip(path, path[1:]):
            e = self.edge_between(a, b)
            if self.edges[e][0] == a:
                segs.append(Segment(e, Fraction(0), Fraction(1)))
            else:
                segs.append(Segment(e, Fraction(1), Fraction(0)))
        return segs

    def _anchors(self, p: Point) -> list[tuple[str, list[Segment]]]:
        if isinstance(p, Vertex):
            return [(p.id, [])]
        u, v, _ = self.edges[p.edge]
        return [
            (u, [Segment(p.edge, p.t, Fraction(0))]),
            (v, [Segment(p.edge, p.t, Fraction(1))]),
        ]

    def route(self, x: Point, y: Point) -> list[Segment]:
        """The arc from ``x`` to ``y`` as an ordered list of edge segments."""
        self.check_point(x)
        self.check_point(y)
        if x == y:
            return []
        if isinstance(x, Interior) and isinstance(y, Interior) and x.edge == y.edge:
            return [Segment(x.edge, x.t, y.t)]
        best = None
        for ax, head in self._anchors(x):
            for ay, tail in self._anchors(y):
                tail = [Segment(s.edge, s.b, s.a) for s in tail]
                segs = head + self._vertex_segments(ax, ay) + tail
                cost = sum(abs(s.b - s.a) * self.length(s.edge) for s in segs)
                if best is None or cost < best[0]:
                    best = (cost, segs)
        return best[1]

    def distance(self, x: Point, y: Point) -> Fraction:
        return sum(
            (abs(s.b - s.a) * self.length(s.edge) for s in self.route(x, y)),
            Fraction(0),
        )

    def germ_toward(self, s: Point, t: Point) -> Germ:
        """Direction at ``s`` of the component of ``X - {s}`` containing ``t``."""
        if s == t:
            raise InputError("germ_toward needs distinct points")
        first = self.route(s, t)[0]
        return Germ(first.edge, 1 if first.b > first.a else -1)

    # -- classification ----------------------------------------------------

    def order(self, p: Point) -> int:
        self.check_point(p)
        if isinstance(p, Vertex):
            return self.degree(p.id)
        return 2

    def leaves(self) -> list[Vertex]:
        if len(self.vertices) == 1:
            return [Vertex(next(iter(self.vertices)))]
        return sorted((Vertex(v) for v in self.vertices if self.degree(v) == 1), key=point_key)

    def branch_vertices(self) -> list[Vertex]:
        return sorted((Vertex(v) for v in self.vertices if self.degree(v) >= 3), key=point_key)

    def max_edge_length(self) -> Fraction:
        return max((l for _, _, l in self.edges.values()), default=Fraction(0))


def order_of_point(X: Dendrite, p: Point) -> int:
    """Number of components of ``X - {p}``."""
    return X.order(p)


def ends(X: Dendrite) -> list[Point]:
    """Points of order 1.  A one-point tree has no ends (order 0)."""
    if len(X.vertices) == 1:
        return []
    return list(X.leaves())


def branch_points(X: Dendrite) -> list[Point]:
    return list(X.branch_vertices())


def star(n: int, length=1, prefix: str = "l") -> Dendrite:
    """The ``n``-star with center ``c`` and leaves ``l1..ln`` (edge ``ei`` to ``li``)."""
    verts = ["c"] + [f"{prefix}{i}" for i in range(1, n + 1)]
    edges = {f"e{i}": ("c", f"{prefix}{i}", Fraction(length)) for i in range(1, n + 1)}
    return Dendrite(verts, edges)


def path_tree(n_edges: int, length=1) -> Dendrite:
    """Path ``p0 - p1 - ... - pn`` with edges ``s1..sn``."""
    verts = [f"p{i}" for i in range(n_edges + 1)]
    edges = {f"s{i}": (f"p{i - 1}", f"p{i}", Fraction(length)) for i in range(1, n_edges + 1)}
    return Dendrite(verts, edges)
