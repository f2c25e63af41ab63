"""Depth-truncated Wazewski dendrites and the classification of leaf tuples.

The truncation of order ``n`` and depth ``k`` is built on a spine of unit
length: generation 0 is the spine itself, and each later generation cuts every
spine segment of the previous generation at its midpoint and hangs ``n - 2``
new leaf edges there.  Every branch vertex therefore has order ``n``; there
are ``2**k - 1`` of them and ``2 + (n - 2) * (2**k - 1)`` leaves.

Leaf tuples are classified by the labeled shape of their hull with degree-two
points suppressed, encoded canonically (AHU codes rooted at the center).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import subsets as ss
from .measures import tree_center
from .tree import Dendrite, InputError, Vertex

LEFT, RIGHT = "a", "b"


@dataclass(frozen=True)
class TruncatedWazewski:
    n: int
    k: int
    tree: Dendrite
    level: Mapping[str, int]
    spine: tuple[str, ...]
    capped: bool = False

    @property
    def order_label(self) -> str:
        return f"cap{self.n}" if self.capped else str(self.n)

    def leaves(self) -> list[str]:
        return sorted(v.id for v in self.tree.leaves())


def _dyadic(num: int, k: int) -> str:
    t = Fraction(num, 2**k)
    if t == 0:
        return LEFT
    if t == 1:
        return RIGHT
    return f"m{t.numerator}_{t.denominator}"


def generate(n: int | None, k: int, cap: int | None = None) -> TruncatedWazewski:
    """Truncation of ``D_n`` at depth ``k``; ``n=None`` stands for infinite
    order and uses ``cap`` branches per branch point instead."""
    capped = n is None
    if capped:
        if cap is None:
            raise InputError("infinite order needs an explicit cap")
        n = cap
    if n < 3:
        raise InputError(f"order must be at least 3, got {n}")
    if k < 0:
        raise InputError(f"depth must be nonnegative, got {k}")
    spine = [_dyadic(i, k) for i in range(2**k + 1)]
    level = {LEFT: 0, RIGHT: 0}
    verts = list(spine)
    edges: dict[str, tuple] = {}
    step = Fraction(1, 2**k)
    for i in range(2**k):
        edges[f"s{i + 1}"] = (spine[i], spine[i + 1], step)
    for i in range(1, 2**k):
        # generation of the midpoint i / 2**k is k minus the 2-adic valuation of i
        gen = k - ((i & -i).bit_length() - 1)
        name = spine[i]
        level[name] = gen
        for j in range(1, n - 1):
            leaf = f"{name}.{j}"
            verts.append(leaf)
            level[leaf] = gen
            edges[f"h{name[1:]}.{j}"] = (name, leaf, Fraction(1, 2**gen))
    return TruncatedWazewski(n, k, Dendrite(verts, edges), level, tuple(spine), capped)


# -- combinatorial hulls and canonical codes ------------------------------------


def vertex_hull(X: Dendrite, vs: Iterable[str]) -> dict[str, set[str]]:
    """Adjacency of the smallest subtree containing the given vertices."""
    vs = list(vs)
    keep = {vs[0]}
    for v in vs[1:]:
        keep.update(X.vertex_path(vs[0], v))
    adj: dict[str, set[str]] = {v: set() for v in keep}
    for u, v, _ in X.edges.values():
        if u in keep and v in keep:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def suppress(adj: Mapping[str, set[str]], keep: Iterable[str] = ()) -> dict[str, set[str]]:
    """Remove degree-two vertices not listed in ``keep``."""
    keep = set(keep)
    adj = {p: set(ns) for p, ns in adj.items()}
    for p in sorted(adj):
        if len(adj[p]) == 2 and p not in keep:
            a, b = adj.pop(p)
            adj[a].discard(p)
            adj[b].discard(p)
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _rooted_code(adj, labels, root, parent) -> str:
    kids = sorted(_rooted_code(adj, labels, c, root) for c in adj[root] if c != parent)
    return "(" + labels.get(root, "") + "".join(kids) + ")"


def shape_code(adj: Mapping[str, set[str]], labels: Mapping[str, str]) -> str:
    """Canonical code of a finite tree with some labeled vertices."""
    centers = sorted(tree_center(adj))
    if len(centers) == 1:
        return _rooted_code(adj, labels, centers[0], None)
    a, b = centers
    ca = _rooted_code(adj, labels, a, b)
    cb = _rooted_code(adj, labels, b, a)
    return "[" + "".join(sorted((ca, cb))) + "]"


def _tuple_labels(entries: Sequence[str]) -> dict[str, str]:
    pos: dict[str, list[int]] = {}
    for i, v in enumerate(entries, start=1):
        pos.setdefault(v, []).append(i)
    return {v: ",".join(map(str, ps)) for v, ps in pos.items()}


def tuple_code(W: TruncatedWazewski, entries: Sequence) -> str:
    """Canonical code of the suppressed hull of a tuple of leaves, with leaf
    labels recording the tuple positions."""
    ids = [e.id if isinstance(e, Vertex) else e for e in entries]
    if not ids:
        raise InputError("empty tuple")
    leaves = set(W.leaves())
    for v in ids:
        if v not in leaves:
            raise InputError(f"{v!r} is not a leaf of the truncation")
    labels = _tuple_labels(ids)
    adj = suppress(vertex_hull(W.tree, ids), keep=labels)
    return shape_code(adj, labels)


def _unlabeled_code(W: TruncatedWazewski, subset: Sequence[str]) -> str:
    adj = suppress(vertex_hull(W.tree, subset), keep=subset)
    return shape_code(adj, {v: "*" for v in subset})


@dataclass
class OrbitCount:
    n: int
    k: int
    p: int
    count: int
    representatives: dict[str, tuple[str, ...]] = field(default_factory=dict)
    complete: bool = True
    examined: int = 0


def orbit_count(
    n: int,
    k: int,
    p: int,
    mode: str = "exhaustive",
    max_tuples: int | None = None,
    seed: int = 0,
    samples: int = 2000,
) -> OrbitCount:
    """Number of distinct tuple codes over ordered ``p``-tuples of distinct leaves.

    ``exhaustive`` walks unordered leaf sets and only permutes one
    representative per unlabeled hull shape, which gives the same set of codes
    as walking every ordered tuple.  ``literal`` walks every ordered tuple.
    ``sample`` draws random ordered tuples; its count is a lower bound and is
    flagged incomplete.
    """
    W = generate(n, k)
    leaves = W.leaves()
    reps: dict[str, tuple[str, ...]] = {}
    examined = 0
    complete = True

    def record(t):
        reps.setdefault(tuple_code(W, t), tuple(t))

    if mode == "literal":
        for t in itertools.permutations(leaves, p):
            if max_tuples is not None and examined >= max_tuples:
                complete = False
                break
            examined += 1
            record(t)
    elif mode == "exhaustive":
        seen_shapes: set[str] = set()
        for subset in itertools.combinations(leaves, p):
            if max_tuples is not None and examined >= max_tuples:
                complete = False
                break
            examined += 1
            shape = _unlabeled_code(W, subset)
            if shape in seen_shapes:
                continue
            seen_shapes.add(shape)
            for t in itertools.permutations(subset):
                record(t)
    elif mode == "sample":
        rng = random.Random(seed)
        complete = False
        if len(leaves) >= p:
            for _ in range(samples):
                examined += 1
                record(rng.sample(leaves, p))
    else:
        raise InputError(f"unknown mode {mode!r}")
    ordered = dict(sorted(reps.items(), key=lambda kv: kv[1]))
    return OrbitCount(n, k, p, len(ordered), ordered, complete, examined)


# -- sub-dendrites between two points -------------------------------------------


def induced_subtree(X: Dendrite, S: ss.ClosedSet) -> Dendrite:
    """The closed set ``S`` as a tree; it must be a union of whole edges or a vertex."""
    if S.partial or not ss.is_connected(X, S):
        raise InputError("closed set is not a union of whole edges")
    edges = {e: X.edges[e] for e in S.full_edges}
    return Dendrite(sorted(S.vertices), edges)


def open_subdendrite(W: TruncatedWazewski, x, y) -> tuple[Dendrite, str, str]:
    """Closure of the component of ``X - {x, y}`` containing the open arc
    between two vertices, with the two vertices marked."""
    x = x.id if isinstance(x, Vertex) else x
    y = y.id if isinstance(y, Vertex) else y
    if x == y:
        raise InputError("open sub-dendrite needs two distinct points")
    X = W.tree
    S = ss.intersection(X, ss.u_side(X, Vertex(x), Vertex(y)), ss.u_side(X, Vertex(y), Vertex(x)))
    return induced_subtree(X, S), x, y


def marked_code(X: Dendrite, marks: Mapping[str, str]) -> str:
    adj = {v: set() for v in X.vertices}
    for u, v, _ in X.edges.values():
        adj[u].add(v)
        adj[v].add(u)
    return shape_code(suppress(adj, keep=marks), marks)


def self_similar(W: TruncatedWazewski) -> bool:
    """Whether the piece between the left spine end and the central branch
    vertex has the suppressed shape of the truncation one level shallower."""
    if W.k < 1:
        raise InputError("self-similarity needs depth at least 1")
    mid = W.spine[len(W.spine) // 2]
    piece, x, y = open_subdendrite(W, LEFT, mid)
    smaller = generate(W.n, W.k - 1)
    return marked_code(piece, {x: "x", y: "y"}) == marked_code(smaller.tree, {LEFT: "x", RIGHT: "y"})


# -- tree <-> dendrite correspondence -------------------------------------------


@dataclass(frozen=True)
class SimplicialTree:
    """Combinatorial tree on the branch points and leaves, with the length of
    the realizing arc on each edge."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, Fraction], ...]


def tree_correspondence(X: Dendrite) -> SimplicialTree:
    """Vertices are branch points and leaves; two are adjacent when no branch
    point separates them."""
    if len(X.vertices) == 1:
        return SimplicialTree(tuple(X.vertices), ())
    keep = {v for v in X.vertices if X.degree(v) != 2}
    edges = []
    for start in sorted(keep):
        for e in X.incident(start):
            prev, cur, total = start, X.other_end(e, start), X.length(e)
            while cur not in keep:
                nxt = next(f for f in X.incident(cur) if X.other_end(f, cur) != prev)
                total += X.length(nxt)
                prev, cur = cur, X.other_end(nxt, cur)
            if start < cur:
                edges.append((start, cur, total))
    return SimplicialTree(tuple(sorted(keep)), tuple(sorted(edges)))


def realize(T: SimplicialTree) -> Dendrite:
    return Dendrite(T.vertices, {f"t{i}": e for i, e in enumerate(T.edges, start=1)})
