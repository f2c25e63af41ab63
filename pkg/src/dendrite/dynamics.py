"""Piecewise-linear homeomorphisms of finite trees and their fixed-point dynamics.

A :class:`PLHomeo` is an automorphism of the combinatorial tree together with
a monotone piecewise-linear bijection of ``[0, 1]`` per edge, carrying the
parameter of an edge to the parameter of its image edge.  Everything is
rational, so fixed sets are finite unions of points and intervals and can be
computed exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from . import subsets as ss
from .subsets import Arc, ClosedSet
from .tree import Dendrite, Germ, InputError, Point, Vertex, point_key

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class PLMap:
    """Strictly monotone PL bijection of ``[0, 1]`` given by its breakpoints."""

    points: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def make(cls, pts: Iterable[tuple]) -> "PLMap":
        pts = sorted((Fraction(x), Fraction(y)) for x, y in pts)
        xs = [x for x, _ in pts]
        if len(pts) < 2 or xs[0] != 0 or xs[-1] != 1 or len(set(xs)) != len(xs):
            raise InputError("PL map needs strictly increasing breakpoints from 0 to 1")
        ys = [y for _, y in pts]
        inc = all(a < b for a, b in zip(ys, ys[1:]))
        dec = all(a > b for a, b in zip(ys, ys[1:]))
        if not (inc or dec) or {ys[0], ys[-1]} != {ZERO, ONE}:
            raise InputError("PL map is not a monotone bijection of [0, 1]")
        keep = [pts[0]]
        for i in range(1, len(pts) - 1):
            (x0, y0), (x1, y1), (x2, y2) = keep[-1], pts[i], pts[i + 1]
            if (y1 - y0) * (x2 - x0) != (y2 - y0) * (x1 - x0):
                keep.append(pts[i])
        keep.append(pts[-1])
        return cls(tuple(keep))

    @classmethod
    def identity(cls) -> "PLMap":
        return cls(((ZERO, ZERO), (ONE, ONE)))

    @classmethod
    def flip(cls) -> "PLMap":
        return cls(((ZERO, ONE), (ONE, ZERO)))

    @property
    def increasing(self) -> bool:
        return self.points[0][1] == 0

    @property
    def is_linear(self) -> bool:
        return len(self.points) == 2

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        xs = [x for x, _ in self.points]
        i = bisect.bisect_right(xs, t) - 1
        i = min(max(i, 0), len(xs) - 2)
        (x0, y0), (x1, y1) = self.points[i], self.points[i + 1]
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)

    def inverse(self) -> "PLMap":
        return PLMap.make((y, x) for x, y in self.points)

    def compose(self, other: "PLMap") -> "PLMap":
        """``self o other``."""
        inv = other.inverse()
        xs = {x for x, _ in other.points} | {inv(x) for x, _ in self.points}
        return PLMap.make((x, self(other(x))) for x in sorted(xs))

    def __str__(self) -> str:
        return ",".join(f"{_fr(x)}:{_fr(y)}" for x, y in self.points)


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class PLHomeo:
    """Self-homeomorphism of a finite tree, exact on rational points.

    ``vmap`` is a vertex bijection preserving adjacency; ``emaps[e]`` is the
    PL map from the parameter of ``e`` to the parameter of its image edge
    (decreasing when the image edge is traversed backwards).
    """

    def __init__(self, X: Dendrite, vmap: Mapping[str, str], emaps: Mapping[str, PLMap]):
        self.X = X
        self.vmap = dict(vmap)
        if set(self.vmap) != set(X.vertices) or set(self.vmap.values()) != set(X.vertices):
            raise InputError("vertex map is not a bijection of the vertex set")
        self.eimage: dict[str, str] = {}
        self.emaps: dict[str, PLMap] = {}
        for e, (u, v, _) in X.edges.items():
            target = X.edge_between(self.vmap[u], self.vmap[v])
            if target is None:
                raise InputError(f"vertex map breaks edge {e!r}")
            phi = emaps.get(e, PLMap.identity())
            forward = X.edges[target][0] == self.vmap[u]
            if phi.increasing != forward:
                raise InputError(f"edge map on {e!r} has the wrong orientation")
            self.eimage[e] = target
            self.emaps[e] = phi

    @classmethod
    def from_increasing(cls, X: Dendrite, vmap: Mapping[str, str], shapes: Mapping[str, PLMap] | None = None):
        """Build from a vertex map and increasing edge profiles; the profile is
        flipped wherever the vertex map reverses an edge."""
        shapes = shapes or {}
        emaps = {}
        for e, (u, v, _) in X.edges.items():
            f = shapes.get(e, PLMap.identity())
            if not f.increasing:
                raise InputError(f"profile on {e!r} must be increasing")
            target = X.edge_between(vmap[u], vmap[v])
            if target is None:
                raise InputError(f"vertex map breaks edge {e!r}")
            emaps[e] = f if X.edges[target][0] == vmap[u] else PLMap.flip().compose(f)
        return cls(X, vmap, emaps)

    @classmethod
    def identity(cls, X: Dendrite) -> "PLHomeo":
        return cls(X, {v: v for v in X.vertices}, {})

    # -- evaluation ----------------------------------------------------------

    def apply(self, p: Point) -> Point:
        self.X.check_point(p)
        if isinstance(p, Vertex):
            return Vertex(self.vmap[p.id])
        return self.X.point(self.eimage[p.edge], self.emaps[p.edge](p.t))

    __call__ = apply

    def germ_image(self, p: Point, germ: Germ) -> Germ:
        sign = germ.sign if self.emaps[germ.edge].increasing else -germ.sign
        return Germ(self.eimage[germ.edge], sign)

    def image_set(self, S: ClosedSet) -> ClosedSet:
        ivs = []
        for e, pieces in S.intervals:
            phi = self.emaps[e]
            ivs += [(self.eimage[e], phi(a), phi(b)) for a, b in pieces]
        return ss.build(self.X, {self.vmap[v] for v in S.vertices}, ivs)

    def compose(self, other: "PLHomeo") -> "PLHomeo":
        """``self o other``."""
        if other.X != self.X:
            raise InputError("homeomorphisms live on different trees")
        vmap = {v: self.vmap[other.vmap[v]] for v in self.X.vertices}
        emaps = {e: self.emaps[other.eimage[e]].compose(other.emaps[e]) for e in self.X.edges}
        return PLHomeo(self.X, vmap, emaps)

    def inverse(self) -> "PLHomeo":
        vmap = {w: v for v, w in self.vmap.items()}
        emaps = {self.eimage[e]: self.emaps[e].inverse() for e in self.X.edges}
        return PLHomeo(self.X, vmap, emaps)

    def power(self, n: int) -> "PLHomeo":
        base = self if n >= 0 else self.inverse()
        out = PLHomeo.identity(self.X)
        for _ in range(abs(n)):
            out = base.compose(out)
        return out

    @property
    def key(self) -> tuple:
        return (tuple(sorted(self.vmap.items())), tuple(sorted(self.emaps.items())))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PLHomeo) and self.X == other.X and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_identity(self) -> bool:
        return self == PLHomeo.identity(self.X)

    def is_isometric(self) -> bool:
        return all(phi.is_linear for phi in self.emaps.values())


def tree_automorphisms(X: Dendrite, limit: int | None = None) -> list[PLHomeo]:
    """Length-preserving automorphisms of ``X``, extended linearly on edges."""
    G = nx.Graph()
    G.add_nodes_from(X.vertices)
    for e, (u, v, length) in X.edges.items():
        G.add_edge(u, v, length=length)
    matcher = GraphMatcher(G, G, edge_match=lambda a, b: a["length"] == b["length"])
    out = []
    for mapping in matcher.isomorphisms_iter():
        out.append(PLHomeo.from_increasing(X, mapping))
        if limit is not None and len(out) >= limit:
            break
    return sorted(out, key=lambda g: g.key)


# -- fixed points ---------------------------------------------------------------


def _piece_fixed(x0, y0, x1, y1) -> list[tuple[Fraction, Fraction]]:
    d0, d1 = y0 - x0, y1 - x1
    if d0 == 0 and d1 == 0:
        return [(x0, x1)]
    if d0 == 0:
        return [(x0, x0)]
    if d1 == 0:
        return [(x1, x1)]
    if (d0 < 0) != (d1 < 0):
        root = x0 + d0 * (x1 - x0) / (d0 - d1)
        return [(root, root)]
    return []


def fixed_set(g: PLHomeo) -> ClosedSet:
    """Exact solution set of ``g(x) = x``."""
    X = g.X
    verts = [v for v, w in g.vmap.items() if v == w]
    ivs = []
    for e in X.edges:
        if g.eimage[e] != e:
            continue
        pts = g.emaps[e].points
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            ivs += [(e, a, b) for a, b in _piece_fixed(x0, y0, x1, y1)]
    return ss.build(X, verts, ivs)


def _complement_components(X: Dendrite, F: ClosedSet) -> list[list[Point]]:
    """Boundary points of each component of the open set ``X - F``."""
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def join(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    boundary: dict = {}
    for v in X.vertices - F.vertices:
        parent[("v", v)] = ("v", v)
    for e, (u, v, _) in sorted(X.edges.items()):
        covered = list(F.on_edge(e))
        if u in F.vertices:
            covered.append((ZERO, ZERO))
        if v in F.vertices:
            covered.append((ONE, ONE))
        covered = ss._merge(covered)
        # each gap is (a, b, a_is_boundary, b_is_boundary)
        gaps = []
        if not covered:
            gaps.append((ZERO, ONE, False, False))
        else:
            if covered[0][0] > 0:
                gaps.append((ZERO, covered[0][0], False, True))
            for (_, b), (c, _) in zip(covered, covered[1:]):
                gaps.append((b, c, True, True))
            if covered[-1][1] < 1:
                gaps.append((covered[-1][1], ONE, True, False))
        for i, (a, b, a_bd, b_bd) in enumerate(gaps):
            node = ("g", e, i)
            parent[node] = node
            boundary[node] = [X.point(e, x) for x, bd in ((a, a_bd), (b, b_bd)) if bd]
            if not a_bd:
                join(("v", u), node)
            if not b_bd:
                join(("v", v), node)
    comps: dict = {}
    for node in parent:
        comps.setdefault(find(node), set()).update(boundary.get(node, []))
    return [sorted(b, key=point_key) for b in comps.values()]


def austro_boreal_arcs(g: PLHomeo) -> list[Arc]:
    """Arcs whose only fixed points are their two (distinct) endpoints."""
    X = g.X
    F = fixed_set(g)
    arcs = []
    for bd in _complement_components(X, F):
        if len(bd) == 2:
            arcs.append(ss.arc(X, bd[0], bd[1]))
        elif len(bd) > 2:
            raise AssertionError("complement component with more than two fixed boundary points")
    return sorted(arcs, key=lambda a: (point_key(a.endpoints[0]), point_key(a.endpoints[1])))


CONNECTED_FIX = "ConnectedFix"
HAS_AUSTRO_BOREAL = "HasAustroBoreal"


def fix_dichotomy(g: PLHomeo) -> str:
    if ss.is_connected(g.X, fixed_set(g)):
        return CONNECTED_FIX
    return HAS_AUSTRO_BOREAL


# -- tectonic decomposition -------------------------------------------------------


@dataclass(frozen=True)
class TranslationWitness:
    """Fundamental segment ``[z, g(z)]`` on an austro-boreal arc.

    ``direction`` is +1 when ``g`` pushes points toward the second endpoint.
    """

    z: Point
    gz: Point
    direction: int


@dataclass(frozen=True)
class OpenPiece:
    arc: Arc
    closure: ClosedSet
    witness: TranslationWitness

    @property
    def removed(self) -> tuple[Point, Point]:
        return self.arc.endpoints


@dataclass(frozen=True)
class TectonicDecomposition:
    austro_boreal: tuple[OpenPiece, ...]
    kernel_components: tuple[tuple[ClosedSet, ClosedSet], ...]

    @property
    def kernel(self) -> list[ClosedSet]:
        return [K for K, _ in self.kernel_components]


def in_open_piece(X: Dendrite, piece: OpenPiece, p: Point) -> bool:
    return p not in piece.removed and ss.contains(X, piece.closure, p)


def _arc_checkpoints(g: PLHomeo, I: Arc) -> list[tuple[Fraction, Point]]:
    """Points of the arc interior where the displacement of ``g`` can change
    slope, with their distance from the first endpoint."""
    X = g.X
    x, y = I.endpoints
    pts = set()
    for s in X.route(x, y):
        lo, hi = min(s.a, s.b), max(s.a, s.b)
        cuts = {lo, hi} | {bx for bx, _ in g.emaps[s.edge].points if lo <= bx <= hi}
        cuts = sorted(cuts)
        pts |= {X.point(s.edge, c) for c in cuts}
        pts |= {X.point(s.edge, (a + b) / 2) for a, b in zip(cuts, cuts[1:])}
    pts -= {x, y}
    return sorted(((X.distance(x, p), p) for p in pts), key=lambda dp: (dp[0], point_key(dp[1])))


def translation_direction(g: PLHomeo, I: Arc) -> int:
    """+1 / -1 if ``g`` moves every interior point of ``I`` toward the second /
    first endpoint, 0 otherwise."""
    X = g.X
    x, _ = I.endpoints
    signs = set()
    for s, p in _arc_checkpoints(g, I):
        gp = g.apply(p)
        if not ss.contains(X, I.carrier, gp):
            return 0
        d = X.distance(x, gp) - s
        signs.add((d > 0) - (d < 0))
    return signs.pop() if len(signs) == 1 and 0 not in signs else 0


def tectonic(g: PLHomeo) -> TectonicDecomposition:
    """Split ``X`` into the open pieces around austro-boreal arcs and the kernel."""
    X = g.X
    F = fixed_set(g)
    pieces = []
    for I in austro_boreal_arcs(g):
        x, y = I.endpoints
        closure = ss.intersection(X, ss.u_side(X, x, y), ss.u_side(X, y, x))
        direction = translation_direction(g, I)
        if direction == 0:
            raise AssertionError("austro-boreal arc without translation behaviour")
        z = _arc_checkpoints(g, I)[0][1]
        pieces.append(OpenPiece(I, closure, TranslationWitness(z, g.apply(z), direction)))
    K = ss.whole(X)
    for P in pieces:
        outside = ss.union(X, ss.complement_closure(X, P.closure), ss.from_points(X, P.removed))
        K = ss.intersection(X, K, outside)
    kernel = tuple((C, ss.intersection(X, C, F)) for C in ss.components(X, K))
    return TectonicDecomposition(tuple(pieces), kernel)


# -- transport of other structures -----------------------------------------------


def push_measure(g: PLHomeo, mu):
    """Push a tree measure forward along an isometric (edgewise linear) ``g``."""
    from .measures import TreeMeasure

    if not g.is_isometric():
        raise InputError("uniform densities are only preserved by edgewise linear maps")
    atoms = {g.apply(p): m for p, m in mu.atoms}
    dens = {g.eimage[e]: m for e, m in mu.densities}
    return TreeMeasure.make(g.X, atoms, dens)


def push_cocycle(g: PLHomeo, value):
    from .cocycle import transport

    return transport(value, g.apply, g.germ_image)


def orbit_monotone_on_arc(g: PLHomeo, I: Arc) -> bool:
    return translation_direction(g, I) != 0
