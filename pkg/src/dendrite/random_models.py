"""Seeded random trees, points, sets, measures and PL homeomorphisms for tests."""

from __future__ import annotations

import random
from fractions import Fraction

from . import subsets as ss
from .dynamics import PLHomeo, PLMap, tree_automorphisms
from .measures import TreeMeasure
from .subsets import ClosedSet
from .tree import Dendrite, Point, Vertex


def random_length(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 6), rng.randint(1, 4))


def random_tree(rng: random.Random, max_vertices: int = 14, min_vertices: int = 2) -> Dendrite:
    n = rng.randint(min_vertices, max_vertices)
    verts = [f"a{i}" for i in range(n)]
    edges = {f"f{i}": (verts[rng.randrange(i)], verts[i], random_length(rng)) for i in range(1, n)}
    return Dendrite(verts, edges)


def symmetric_tree(rng: random.Random, max_vertices: int = 14) -> Dendrite:
    """Copies of one random rooted tree glued at a common center."""
    copies = rng.randint(2, 4)
    size = max(1, (max_vertices - 1) // copies)
    m = rng.randint(1, size)
    parents = [None] + [rng.randrange(i) for i in range(1, m)]
    lengths = [None] + [random_length(rng) for _ in range(1, m)]
    root_len = random_length(rng)
    verts = ["c"]
    edges = {}
    for k in range(copies):
        names = [f"b{k}_{i}" for i in range(m)]
        verts += names
        edges[f"g{k}_0"] = ("c", names[0], root_len)
        for i in range(1, m):
            edges[f"g{k}_{i}"] = (names[parents[i]], names[i], lengths[i])
    return Dendrite(verts, edges)


def random_fraction01(rng: random.Random, max_den: int = 8) -> Fraction:
    d = rng.randint(2, max_den)
    return Fraction(rng.randint(1, d - 1), d)


def random_point(rng: random.Random, X: Dendrite) -> Point:
    if not X.edges or rng.random() < 0.3:
        return Vertex(rng.choice(sorted(X.vertices)))
    return X.point(rng.choice(sorted(X.edges)), random_fraction01(rng))


def random_subdendrite(rng: random.Random, X: Dendrite, extra: list[Point] = ()) -> ClosedSet:
    pts = [random_point(rng, X) for _ in range(rng.randint(1, 3))] + list(extra)
    return ss.hull(X, pts)


def pairwise_intersecting_family(rng: random.Random, X: Dendrite, size: int) -> list[ClosedSet]:
    """Each new member is the hull of random points plus one point of every
    earlier member, so any two members meet."""
    family: list[ClosedSet] = []
    for _ in range(size):
        anchors = [rng.choice(ss.sample_points(X, S)) for S in family]
        family.append(random_subdendrite(rng, X, anchors))
    return family


def random_weights(rng: random.Random, k: int) -> list[Fraction]:
    w = [rng.randint(1, 9) for _ in range(k)]
    total = sum(w)
    return [Fraction(x, total) for x in w]


def random_measure(rng: random.Random, X: Dendrite, atom_chance: float = 0.4) -> TreeMeasure:
    edges = sorted(X.edges)
    use_atoms = not edges or rng.random() < atom_chance
    if use_atoms:
        pts = list({random_point(rng, X) for _ in range(rng.randint(1, 4))})
        if rng.random() < 0.3:
            # force ties between maximal atoms
            return TreeMeasure.make(X, atoms={p: Fraction(1, len(pts)) for p in pts})
        return TreeMeasure.make(X, atoms=dict(zip(pts, random_weights(rng, len(pts)))))
    chosen = rng.sample(edges, rng.randint(1, len(edges)))
    if rng.random() < 0.25 and len(chosen) >= 2:
        half = Fraction(1, 2)
        return TreeMeasure.make(X, densities={chosen[0]: half, chosen[1]: half})
    return TreeMeasure.make(X, densities=dict(zip(chosen, random_weights(rng, len(chosen)))))


def random_profile(rng: random.Random) -> PLMap:
    """An increasing PL bijection of [0, 1], sometimes with diagonal pieces."""
    kind = rng.random()
    if kind < 0.2:
        return PLMap.identity()
    k = rng.randint(1, 3)
    grid = 12
    xs = sorted(rng.sample(range(1, grid), k))
    ys = sorted(rng.sample(range(1, grid), k))
    pts = [(Fraction(0), Fraction(0))] + [(Fraction(a, grid), Fraction(b, grid)) for a, b in zip(xs, ys)]
    if kind < 0.45:
        # a fixed interval in the middle
        a, b = sorted(rng.sample(range(1, grid), 2))
        pts = [(Fraction(0), Fraction(0)), (Fraction(a, grid), Fraction(a, grid)), (Fraction(b, grid), Fraction(b, grid))]
        pts.insert(1, (Fraction(a, 2 * grid), random_fraction01(rng, 4) * Fraction(a, grid)))
    pts.append((Fraction(1), Fraction(1)))
    return PLMap.make(pts)


def random_pl_homeo(rng: random.Random, X: Dendrite) -> PLHomeo:
    auts = tree_automorphisms(X, limit=48)
    base = rng.choice(auts)
    shapes = {e: random_profile(rng) for e in sorted(X.edges)}
    return PLHomeo.from_increasing(X, base.vmap, shapes)


def random_dynamics_tree(rng: random.Random, max_vertices: int = 12) -> Dendrite:
    return symmetric_tree(rng, max_vertices) if rng.random() < 0.6 else random_tree(rng, max_vertices)
