from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dendrite import symbolic as sy
from dendrite.symbolic import FreeTree, Piece, SEdge, SVertex
from dendrite.tree import InputError

rngs = st.integers(0, 2**32).map(random.Random)

T2 = FreeTree(2)
TS = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))


def naive_reduce(w: str) -> str:
    """Cancel adjacent inverse pairs by repeated substitution."""
    pairs = [a + a.upper() for a in "xyz"] + [a.upper() + a for a in "xyz"]
    while True:
        for p in pairs:
            if p in w:
                w = w.replace(p, "", 1)
                break
        else:
            return w


def sample_points(T: FreeTree, radius: int = 3):
    """Vertices up to ``radius`` and edge points at thirds and halves just inside it."""
    words = list(sy.words_up_to(T.alphabet, radius))
    pts = [SVertex(w) for w in words]
    for w in words:
        if len(w) < radius:
            for a in T.alphabet:
                if not w or w[-1] != sy.inv_letter(a):
                    pts += [T.edge_point(w, a, t) for t in TS]
    return pts


SAMPLE = sample_points(T2)


def random_gate(rng, T: FreeTree):
    w = "".join(rng.choice(T.alphabet) for _ in range(rng.randint(0, 2)))
    w = sy.reduce(w)
    if rng.random() < 0.5:
        return SVertex(w)
    a = rng.choice([c for c in T.alphabet if not w or w[-1] != sy.inv_letter(c)])
    return T.edge_point(w, a, rng.choice(TS))


def random_convex(rng, T: FreeTree) -> sy.Convex:
    pieces = []
    for _ in range(rng.randint(1, 3)):
        g = random_gate(rng, T)
        dirs = T.directions(g)
        pieces.append(Piece(g, frozenset(d for d in dirs if rng.random() < 0.6)))
    return sy.convex(T, pieces)


def random_word(rng, T: FreeTree, n: int) -> str:
    return sy.reduce("".join(rng.choice(T.alphabet) for _ in range(n)))


# -- words -----------------------------------------------------------------------------


def test_word_basics():
    assert sy.reduce("xXy") == "y"
    assert sy.mul("xy", "Yx") == "xx"
    assert sy.inverse("xyZ") == "zYX"
    assert sy.is_reduced("xyx") and not sy.is_reduced("xyYx")


@given(st.text(alphabet="xXyYzZ", max_size=12))
def test_reduce_matches_substitution(w):
    assert sy.reduce(w) == naive_reduce(w)
    assert sy.mul(w, sy.inverse(w)) == ""


def test_words_up_to_counts():
    counts = {}
    for w in sy.words_up_to(T2.alphabet, 4):
        counts[len(w)] = counts.get(len(w), 0) + 1
    assert counts == {0: 1, 1: 4, 2: 12, 3: 36, 4: 108}
    assert list(sy.words_up_to(T2.alphabet, 1)) == ["", "x", "X", "y", "Y"]


def test_rank_and_word_validation():
    with pytest.raises(InputError):
        FreeTree(0)
    with pytest.raises(InputError):
        T2.vertex("xz")
    with pytest.raises(InputError):
        T2.vertex("xX")


# -- points ----------------------------------------------------------------------------


def test_edge_points_are_canonical():
    assert T2.edge_point("x", "X", Fraction(1, 4)) == SEdge("", "x", Fraction(3, 4))
    assert T2.edge_point("x", "y", 0) == SVertex("x")
    assert T2.edge_point("x", "y", 1) == SVertex("xy")
    with pytest.raises(InputError):
        T2.edge_point("", "x", 2)


def test_ends_are_canonical():
    assert T2.end("x", "x") == T2.end("", "x")
    assert T2.end("", "xyxy") == T2.end("", "xy")
    assert T2.end("yx", "yx") == T2.end("", "yx")
    with pytest.raises(InputError):
        T2.end("x", "X")
    assert T2.ray("y").letters(3) == "yyy"


def test_parse_round_trip():
    for p in (SVertex(""), SVertex("xY"), T2.edge_point("y", "x", Fraction(2, 7)), T2.end("Y", "xy")):
        assert sy.parse_spoint(T2, str(p)) == p
    with pytest.raises(InputError):
        sy.parse_spoint(T2, "w:x:y")


@given(rngs)
def test_action_is_a_left_action(rng):
    g, h = random_word(rng, T2, 4), random_word(rng, T2, 4)
    for p in rng.sample(SAMPLE, 10):
        assert T2.act(g, T2.act(h, p)) == T2.act(sy.mul(g, h), p)
        assert T2.act("", p) == p


@given(rngs)
def test_action_on_ends_is_a_left_action(rng):
    g, h = random_word(rng, T2, 4), random_word(rng, T2, 4)
    period = rng.choice(["x", "Y", "xy", "xY"])
    prefix = random_word(rng, T2, 2)
    if not sy.is_reduced(prefix + period + period):
        return
    e = T2.end(prefix, period)
    assert T2.act(g, T2.act(h, e)) == T2.act(sy.mul(g, h), e)


@given(rngs)
def test_elements_fix_exactly_their_two_ends(rng):
    g = random_word(rng, T2, 5)
    if not g:
        assert sy.fixed_ends(T2, g) is None
        return
    ends = sy.fixed_ends(T2, g)
    assert len(ends) == 2
    assert all(T2.act(g, e) == e for e in ends)
    assert all(T2.act(g, p) != p for p in SAMPLE)


def test_cyclic_decomposition():
    assert sy.cyclic_decomposition("xyX") == ("x", "y")
    assert sy.cyclic_decomposition("xy") == ("", "xy")


# -- directions and sets ------------------------------------------------------------------


def test_directions():
    v = SVertex("x")
    assert T2.direction(v, SVertex("")) == "X"
    assert T2.direction(v, SVertex("xyy")) == "y"
    assert T2.direction(v, v) is None
    e = T2.edge_point("", "x", Fraction(1, 2))
    assert T2.direction(e, SVertex("xy")) == "+"
    assert T2.direction(e, T2.ray("y")) == "-"
    with pytest.raises(InputError):
        T2.direction(T2.ray("x"), v)


def test_cylinder_membership():
    C = sy.cylinder(T2, "xy")
    for p in SAMPLE:
        if isinstance(p, SVertex):
            assert sy.contains(T2, C, p) == p.word.startswith("xy")
    assert sy.contains(T2, C, T2.end("xy", "x"))
    assert not sy.contains(T2, C, T2.ray("x"))
    assert sy.cylinder(T2, "") == sy.WHOLE


def test_disjoint_and_subset_examples():
    Cx, Cxy, Cy = sy.cylinder(T2, "x"), sy.cylinder(T2, "xy"), sy.cylinder(T2, "y")
    assert sy.disjoint(T2, Cx, Cy)
    assert sy.is_subset(T2, Cxy, Cx) and not sy.is_subset(T2, Cx, Cxy)
    e = T2.edge_point("", "x", Fraction(1, 2))
    # the two closed sides of an edge point share only that point
    plus, minus = sy.cone(T2, e, "+"), sy.cone(T2, e, "-")
    assert not sy.disjoint(T2, plus, minus)
    both, point = sy.intersect(plus, minus), sy.singleton(T2, e)
    assert sy.is_subset(T2, both, point) and sy.is_subset(T2, point, both)
    assert sy.is_subset(T2, sy.singleton(T2, e), plus)


@given(rngs)
def test_contains_distributes_over_intersection(rng):
    A, B = random_convex(rng, T2), random_convex(rng, T2)
    AB = sy.intersect(A, B)
    for p in SAMPLE:
        assert sy.contains(T2, AB, p) == (sy.contains(T2, A, p) and sy.contains(T2, B, p))


@given(rngs)
def test_disjoint_matches_sampling(rng):
    A, B = random_convex(rng, T2), random_convex(rng, T2)
    common = any(sy.contains(T2, A, p) and sy.contains(T2, B, p) for p in SAMPLE)
    assert sy.disjoint(T2, A, B) == (not common)


@given(rngs)
def test_subset_matches_sampling(rng):
    A, B = random_convex(rng, T2), random_convex(rng, T2)
    if rng.random() < 0.3:
        A = sy.intersect(A, B)
    inside = all(sy.contains(T2, B, p) for p in SAMPLE if sy.contains(T2, A, p))
    assert sy.is_subset(T2, A, B) == inside


@given(rngs)
def test_image_is_pointwise(rng):
    S = random_convex(rng, T2)
    g = random_word(rng, T2, 3)
    gS = sy.image(T2, g, S)
    for p in SAMPLE:
        assert sy.contains(T2, gS, T2.act(g, p)) == sy.contains(T2, S, p)


def test_u_side_and_guard():
    a, b = SVertex(""), SVertex("xy")
    U = sy.u_side(T2, a, b)
    assert U == sy.cone(T2, a, "x")
    with pytest.raises(InputError):
        sy.u_side(T2, a, a)
    G = sy.arc_complement_guard(T2, SVertex("X"), SVertex("xy"))
    assert sy.contains(T2, G, SVertex("XX")) and sy.contains(T2, G, SVertex("xyy"))
    assert not sy.contains(T2, G, SVertex("y")) and not sy.contains(T2, G, SVertex("xx"))


# -- measures ------------------------------------------------------------------------------


def test_cylinder_masses():
    assert sy.cylinder_mass(T2, "") == 1
    assert sy.cylinder_mass(T2, "x") == Fraction(1, 4)
    assert sy.cylinder_mass(T2, "xy") == Fraction(1, 12)
    for w in ("", "x", "Yx"):
        children = [w + a for a in T2.alphabet if not w or w[-1] != sy.inv_letter(a)]
        assert sum(sy.cylinder_mass(T2, c) for c in children) == sy.cylinder_mass(T2, w)


def test_measure_validation():
    with pytest.raises(InputError):
        sy.SymbolicMeasure.make(T2, {"x": Fraction(1, 2)})
    with pytest.raises(InputError):
        sy.SymbolicMeasure.make(T2, {"x": 0}, boundary=1)
    with pytest.raises(InputError):
        sy.mass(T2, sy.SymbolicMeasure.make(T2, boundary=1), sy.intersect(sy.cylinder(T2, "x"), sy.cylinder(T2, "y")))


@given(rngs)
def test_piece_mass_matches_cylinder_sum(rng):
    g = random_gate(rng, T2)
    P = Piece(g, frozenset(d for d in T2.directions(g) if rng.random() < 0.5))
    S = sy.convex(T2, [P])
    atoms = {random_word(rng, T2, 3): Fraction(1, 4) for _ in range(2)}
    boundary = 1 - sum(atoms.values())
    mu = sy.SymbolicMeasure.make(T2, atoms, boundary)
    # depth-4 cylinders lie wholly on one side of any gate of length at most 3
    want = sum((sy.cylinder_mass(T2, w) for w in sy.words_up_to(T2.alphabet, 4, 4) if sy.contains(T2, S, SVertex(w))), Fraction(0))
    want = boundary * want + sum((m for w, m in mu.atoms if sy.contains(T2, S, SVertex(w))), Fraction(0))
    assert sy.mass(T2, mu, S) == want


@given(rngs)
def test_pushed_mass_is_mass_of_preimage(rng):
    mu = sy.SymbolicMeasure.make(T2, {"": Fraction(1, 2)}, boundary=Fraction(1, 2))
    g = random_word(rng, T2, 3)
    S = sy.cylinder(T2, random_word(rng, T2, 2))
    pushed = sy.pushed_mass(T2, mu, g, S)
    assert 0 <= pushed <= 1
    # the atom at the identity lands on g
    atom_part = Fraction(1, 2) if sy.contains(T2, S, SVertex(g)) else 0
    assert pushed >= atom_part
