from __future__ import annotations

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dendrite import universal as uv
from dendrite.random_models import random_tree
from dendrite.tree import Dendrite, InputError, Vertex, path_tree, star

rngs = st.integers(0, 2**32).map(random.Random)


def labeled_hull(W, entries) -> nx.Graph:
    """Suppressed hull of the entries with position labels, built with networkx."""
    G = nx.Graph()
    for u, v, _ in W.tree.edges.values():
        G.add_edge(u, v)
    nodes = set()
    for a, b in itertools.combinations(entries, 2):
        nodes.update(nx.shortest_path(G, a, b))
    nodes.update(entries)
    H = G.subgraph(nodes).copy()
    for v in list(H.nodes):
        if H.degree(v) == 2 and v not in entries:
            a, b = H.neighbors(v)
            H.remove_node(v)
            H.add_edge(a, b)
    for v in H.nodes:
        H.nodes[v]["label"] = ",".join(str(i + 1) for i, x in enumerate(entries) if x == v)
    return H


def same_labeled_shape(G, H) -> bool:
    return nx.is_isomorphic(G, H, node_match=lambda a, b: a["label"] == b["label"])


# -- the generator --------------------------------------------------------------------


def test_generator_examples():
    W0 = uv.generate(3, 0)
    assert len(W0.tree.edges) == 1 and W0.tree.branch_vertices() == []
    W1 = uv.generate(3, 1)
    assert len(W1.tree.branch_vertices()) == 1 and len(W1.leaves()) == 3
    W2 = uv.generate(3, 2)
    assert len(W2.tree.branch_vertices()) == 3 and len(W2.leaves()) == 5


def test_generator_rejects_small_orders():
    with pytest.raises(InputError):
        uv.generate(2, 1)
    with pytest.raises(InputError):
        uv.generate(None, 1)
    assert uv.generate(None, 1, cap=6).order_label == "cap6"


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_generator_counts_and_orders(n, k):
    W = uv.generate(n, k)
    X = W.tree
    branch = X.branch_vertices()
    assert len(branch) == 2**k - 1
    assert len(W.leaves()) == 2 + (n - 2) * (2**k - 1)
    assert all(X.degree(v.id) == n for v in branch)
    assert all(X.degree(v) in (1, n) for v in X.vertices)
    # generation j contributes 2**(j-1) branch vertices
    for j in range(1, k + 1):
        assert sum(1 for v in branch if W.level[v.id] == j) == 2 ** (j - 1)


# -- codes ----------------------------------------------------------------------------


def test_pairs_share_the_arc_code():
    W = uv.generate(3, 3)
    codes = {uv.tuple_code(W, t) for t in itertools.permutations(W.leaves(), 2)}
    assert len(codes) == 1


def test_triples_share_the_tripod_code():
    W = uv.generate(4, 2)
    codes = {uv.tuple_code(W, t) for t in itertools.permutations(W.leaves(), 3)}
    assert len(codes) == 1


def test_repeated_entries_collapse_labels():
    W = uv.generate(3, 2)
    a, b = W.leaves()[:2]
    assert uv.tuple_code(W, (a, a, b)) == uv.tuple_code(W, (b, b, a))
    assert uv.tuple_code(W, (a, a, b)) != uv.tuple_code(W, (a, b, a))


def test_tuple_code_rejects_non_leaves():
    W = uv.generate(3, 2)
    with pytest.raises(InputError):
        uv.tuple_code(W, ("a", "m1_2"))


def test_code_is_independent_of_the_rooting():
    # bicentral and central shapes both come out the same for isomorphic labels
    adj = {"x": {"y"}, "y": {"x", "z"}, "z": {"y"}}
    same = {"z": {"y"}, "y": {"z", "x"}, "x": {"y"}}
    assert uv.shape_code(adj, {"x": "1", "z": "2"}) == uv.shape_code(same, {"z": "1", "x": "2"})


@given(rngs)
def test_code_equality_matches_labeled_isomorphism(rng):
    n, k = rng.choice([(3, 3), (4, 2), (5, 2)])
    W = uv.generate(n, k)
    p = rng.randint(2, 5)
    s = rng.sample(W.leaves(), p)
    t = rng.sample(W.leaves(), p) if rng.random() < 0.5 else [s[i] for i in rng.sample(range(p), p)]
    same = uv.tuple_code(W, s) == uv.tuple_code(W, t)
    assert same == same_labeled_shape(labeled_hull(W, s), labeled_hull(W, t))


# -- orbit counts -------------------------------------------------------------------------


@pytest.mark.parametrize("n,k,p,count", [(3, 2, 3, 1), (5, 2, 3, 1), (3, 3, 4, 3), (4, 3, 4, 4), (3, 2, 2, 1)])
def test_orbit_counts(n, k, p, count):
    res = uv.orbit_count(n, k, p)
    assert res.count == count and res.complete


@pytest.mark.parametrize("n,k,p", [(3, 2, 3), (3, 2, 4), (4, 2, 4), (3, 3, 4)])
def test_literal_enumeration_agrees(n, k, p):
    fast = uv.orbit_count(n, k, p)
    slow = uv.orbit_count(n, k, p, mode="literal")
    assert set(fast.representatives) == set(slow.representatives)


def test_literal_classes_match_networkx_classes():
    W = uv.generate(3, 3)
    graphs = []
    for t in itertools.permutations(W.leaves()[:7], 4):
        G = labeled_hull(W, t)
        if not any(same_labeled_shape(G, H) for H in graphs):
            graphs.append(G)
    assert len(graphs) == 3


def test_depth_stability():
    for n, p in ((3, 3), (3, 4), (4, 4)):
        assert uv.orbit_count(n, 3, p).count == uv.orbit_count(n, 4, p).count


def test_partial_enumeration_is_flagged():
    res = uv.orbit_count(3, 3, 4, max_tuples=5)
    assert not res.complete and res.examined == 5
    sample = uv.orbit_count(3, 3, 4, mode="sample", seed=1, samples=300)
    assert not sample.complete and sample.count <= 3
    with pytest.raises(InputError):
        uv.orbit_count(3, 2, 3, mode="guess")


# -- self-similarity -------------------------------------------------------------------------


def test_open_subdendrite_of_depth_one():
    W = uv.generate(3, 1)
    piece, x, y = uv.open_subdendrite(W, "a", "b")
    assert piece == W.tree and (x, y) == ("a", "b")
    with pytest.raises(InputError):
        uv.open_subdendrite(W, "a", "a")


def test_open_subdendrite_between_nearby_vertices_is_proper():
    W = uv.generate(3, 3)
    piece, _, _ = uv.open_subdendrite(W, Vertex("m1_4"), Vertex("m1_2"))
    assert len(piece.vertices) < len(W.tree.vertices)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_self_similarity(n, k):
    assert uv.self_similar(uv.generate(n, k))


# -- tree correspondence ----------------------------------------------------------------


def test_correspondence_of_a_path():
    T = uv.tree_correspondence(path_tree(4))
    assert T.vertices == ("p0", "p4") and [e[:2] for e in T.edges] == [("p0", "p4")]


def test_correspondence_of_a_subdivided_star():
    X = Dendrite(
        ["c", "m1", "m2", "m3", "l1", "l2", "l3"],
        {f"a{i}": ("c", f"m{i}", 1) for i in (1, 2, 3)} | {f"b{i}": (f"m{i}", f"l{i}", 1) for i in (1, 2, 3)},
    )
    T = uv.tree_correspondence(X)
    assert T.vertices == ("c", "l1", "l2", "l3")
    assert all(a == "c" and length == 2 for a, _, length in T.edges)
    assert uv.tree_correspondence(uv.realize(T)) == T


def test_correspondence_of_a_truncation_is_its_own_tree():
    X = uv.generate(3, 2).tree
    T = uv.tree_correspondence(X)
    assert uv.realize(T).vertices == X.vertices
    assert nx.is_isomorphic(nx.Graph([e[:2] for e in T.edges]), nx.Graph([e[:2] for e in X.edges.values()]))


@given(rngs)
def test_correspondence_round_trip(rng):
    X = random_tree(rng, 14)
    T = uv.tree_correspondence(X)
    assert uv.tree_correspondence(uv.realize(T)) == T
    assert set(T.vertices) == {v for v in X.vertices if X.degree(v) != 2}


def test_single_vertex_and_star():
    X = Dendrite(["solo"], {})
    assert uv.tree_correspondence(X).vertices == ("solo",)
    assert len(uv.tree_correspondence(star(5)).edges) == 5
