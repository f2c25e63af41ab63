from __future__ import annotations

import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dendrite import actions as ac
from dendrite import subsets as ss
from dendrite import symbolic as sy
from dendrite.actions import Failure, PLAction, SymbolicAction
from dendrite.dynamics import PLHomeo, tree_automorphisms
from dendrite.random_models import random_dynamics_tree, random_pl_homeo
from dendrite.tree import InputError, Interior, Vertex, star

rngs = st.integers(0, 2**32).map(random.Random)

C, L1, L2, L3 = Vertex("c"), Vertex("l1"), Vertex("l2"), Vertex("l3")
HALF = Fraction(1, 2)


def rotation_action():
    X = star(3)
    rho = PLHomeo.from_increasing(X, {"c": "c", "l1": "l2", "l2": "l3", "l3": "l1"})
    return PLAction(X, [("rho", rho)])


FREE = SymbolicAction.free(2)
T = FREE.T


# -- words ------------------------------------------------------------------------------


def test_words_enumerate_distinct_elements():
    words = list(FREE.words(3))
    assert [len(w) for w, _ in words].count(1) == 4
    assert len(words) == 4 + 12 + 36
    assert all(FREE.evaluate(w) == g for w, g in words)
    assert FREE.format_word(((0, 1), (1, -1))) == "xY"
    assert FREE.format_word(()) == "1"


def test_words_skip_repeated_elements():
    # the rotation has order three, so only rho and rho^-1 are new
    act = rotation_action()
    assert [act.format_word(w) for w, _ in act.words(4)] == ["rho", "rho^-1"]


def test_reduce_and_invert_words():
    w = ((0, 1), (1, 1), (1, -1), (0, 1))
    assert ac.Action.reduce_word(w) == ((0, 1), (0, 1))
    assert FREE.invert_word(((0, 1), (1, 1))) == ((1, -1), (0, -1))


def test_backends_reject_bad_generators():
    with pytest.raises(InputError):
        SymbolicAction(T, [("a", "x"), ("a", "y")])
    with pytest.raises(InputError):
        PLAction(star(3), [("g", PLHomeo.identity(star(4)))])


# -- elementarity ------------------------------------------------------------------------


def test_rotation_has_a_fixed_point():
    v = ac.elementarity_certificate(rotation_action(), 3)
    assert v.kind == "FixedPoint" and v.points == (C,)


def test_identity_generators_fix_the_base_point():
    act = SymbolicAction(T, [("a", ""), ("b", "")])
    assert ac.elementarity_certificate(act, 2) == ac.Verdict("FixedPoint", (sy.SVertex(""),))


def test_cyclic_subgroup_fixes_an_end():
    act = SymbolicAction(T, [("a", "xy")])
    (end,) = ac.elementarity_certificate(act, 2).points
    assert isinstance(end, sy.SEnd) and T.act("xy", end) == end


def test_free_action_is_unknown():
    assert ac.elementarity_certificate(FREE, 6).kind == "Unknown"


def test_orbits():
    act = rotation_action()
    assert sorted(map(str, ac.orbit(act, L1, 10))) == ["v:l1", "v:l2", "v:l3"]
    assert ac.orbit(act, L1, 2) is None
    assert ac.orbit(FREE, sy.SVertex(""), 50) is None


@given(rngs)
def test_finite_tree_certificates_are_invariant(rng):
    X = random_dynamics_tree(rng, 9)
    gens = [("g", random_pl_homeo(rng, X))]
    gens += [(f"s{i}", g) for i, g in enumerate(tree_automorphisms(X, limit=3))]
    act = PLAction(X, gens)
    v = ac.elementarity_certificate(act, 2)
    # a finite tree never leaves the search empty-handed
    assert v.kind in ("FixedPoint", "InvariantPair", "FiniteOrbit")
    assert (len(v.points) == 1) == (v.kind == "FixedPoint")
    for _, g in gens:
        assert {g.apply(p) for p in v.points} == set(v.points)


# -- move-off ---------------------------------------------------------------------------------


def test_move_off_a_cylinder():
    Y = sy.cylinder(T, "x")
    res = ac.move_off(FREE, Y, 2)
    assert isinstance(res, ac.MoveOff)
    assert FREE.evaluate(res.word) == res.element
    assert sy.disjoint(T, sy.image(T, res.element, Y), Y)


def test_move_off_the_other_generator_squared_also_works():
    Y = sy.cylinder(T, "x")
    assert sy.disjoint(T, sy.image(T, "yy", Y), Y)


def test_move_off_a_single_vertex():
    act = rotation_action()
    res = ac.move_off(act, ss.singleton(act.X, L1), 2)
    assert act.format_word(res.word) == "rho"
    res = ac.move_off(FREE, sy.singleton(T, sy.SVertex("")), 2)
    assert FREE.format_word(res.word) == "x"


def test_move_off_failures():
    assert isinstance(ac.move_off(FREE, sy.WHOLE, 3), Failure)
    act = rotation_action()
    # anything containing the center stays put
    assert isinstance(ac.move_off(act, ss.hull(act.X, [C, L1]), 3), Failure)
    with pytest.raises(InputError):
        ac.move_off(act, ss.EMPTY, 2)


def test_move_off_a_leg():
    act = rotation_action()
    Y = ss.hull(act.X, [Interior("e1", HALF), L1])
    res = ac.move_off(act, Y, 2)
    assert act.format_word(res.word) == "rho"
    assert ss.intersection(act.X, res.element.image_set(Y), Y).is_empty


@given(rngs)
def test_move_off_results_are_disjoint(rng):
    w = "".join(rng.choice(T.alphabet) for _ in range(rng.randint(1, 3)))
    w = sy.reduce(w)
    if not w:
        return
    Y = sy.cylinder(T, w)
    res = ac.move_off(FREE, Y, 3)
    assert isinstance(res, ac.MoveOff)
    assert sy.disjoint(T, sy.image(T, res.element, Y), Y)


# -- ping-pong ---------------------------------------------------------------------------------


def test_free_pair_in_the_free_group():
    cert = ac.find_free_pair(FREE, 4)
    assert not isinstance(cert, Failure)
    assert ac.verify_pingpong(FREE, cert)
    assert FREE.evaluate(cert.a_word) == cert.a
    assert FREE.evaluate(cert.b_word) == cert.b
    checked, bad = ac.pair_relations(FREE, cert, 4)
    assert checked == 4 + 12 + 36 + 108 and bad == []


def test_verify_rejects_broken_certificates():
    cert = ac.find_free_pair(FREE, 4)
    assert not ac.verify_pingpong(FREE, replace(cert, a=""))
    assert not ac.verify_pingpong(FREE, replace(cert, a_plus=cert.a_minus))
    assert not ac.verify_pingpong(FREE, replace(cert, b_plus=cert.a_plus))
    empty = sy.intersect(sy.cylinder(T, "x"), sy.cylinder(T, "y"))
    assert not ac.verify_pingpong(FREE, replace(cert, b_minus=empty))


@given(st.sampled_from(["x", "Y", "xy", "yXX"]))
def test_certificates_survive_conjugation(u):
    cert = ac.find_free_pair(FREE, 4)
    ui = sy.inverse(u)
    moved = ac.PingPongCertificate(
        cert.a_word,
        cert.b_word,
        sy.mul(u, cert.a, ui),
        sy.mul(u, cert.b, ui),
        *(sy.image(T, u, S) for S in cert.sets().values()),
    )
    assert ac.verify_pingpong(FREE, moved)


def test_no_free_pair_for_a_rotation():
    assert isinstance(ac.find_free_pair(rotation_action(), 3), Failure)


def test_free_pair_search_depth_limit():
    assert isinstance(ac.find_free_pair(FREE, 0), Failure)


# -- strong proximality -------------------------------------------------------------------------


def test_dirac_is_pushed_entirely_toward_the_end():
    mu = sy.SymbolicMeasure.make(T, {"": 1})
    target = T.ray("x")
    res = ac.proximality_push(FREE, mu, target, 4, 6)
    assert res.failure is None and len(res.steps) == 4
    for s in res.steps:
        U = sy.u_side(T, s.x_n, target)
        # the pushed Dirac mass sits at the image of the identity
        assert s.mass == (1 if sy.contains(T, U, sy.SVertex(s.element)) else 0)
        assert s.mass == 1
        assert FREE.evaluate(s.word) == s.element


def test_proximality_masses_increase_to_one():
    mu = sy.SymbolicMeasure.make(T, {w: Fraction(1, 4) for w in T.alphabet})
    res = ac.proximality_push(FREE, mu, T.ray("x"), 5, 6)
    assert res.failure is None
    masses = [s.mass for s in res.steps]
    assert all(m >= 1 - Fraction(1, s.n) for m, s in zip(masses, res.steps))


def test_mass_already_near_the_end_stays_there():
    mu = sy.SymbolicMeasure.make(T, {"xx": 1})
    res = ac.proximality_push(FREE, mu, T.ray("x"), 1, 6)
    assert sy.contains(T, sy.u_side(T, res.steps[0].x_n, T.ray("x")), sy.SVertex("xx"))
    assert res.steps[0].mass == 1


def test_proximality_needs_the_symbolic_backend():
    with pytest.raises(InputError):
        ac.proximality_push(rotation_action(), None, None, 1, 1)


# -- minimal invariant sub-dendrite ---------------------------------------------------------------


def test_minimal_estimate_for_a_rotation():
    act = rotation_action()
    est = ac.minimal_subdendrite_estimate(act, [L1, Interior("e2", HALF)], 3)
    assert est.hulls[0] == ss.whole(act.X)
    assert est.hulls[1] == ss.hull(act.X, [Interior(e, HALF) for e in ("e1", "e2", "e3")])
    assert est.agree


def test_fixed_seed_gives_a_point():
    act = rotation_action()
    est = ac.minimal_subdendrite_estimate(act, [C], 3)
    assert est.hulls == (ss.singleton(act.X, C),)


def test_minimal_estimate_for_the_free_group():
    est = ac.minimal_subdendrite_estimate(FREE, [sy.SVertex(""), sy.SVertex("x")], 2)
    assert len(est.hulls[0]) == 17 and est.agree
    with pytest.raises(InputError):
        ac.minimal_subdendrite_estimate(FREE, [T.ray("x")], 1)
    with pytest.raises(InputError):
        ac.minimal_subdendrite_estimate(FREE, [], 1)


def test_disjoint_fixed_orbits_disagree():
    # the identity action: each seed is its own orbit
    act = PLAction(star(3), [("e", PLHomeo.identity(star(3)))])
    est = ac.minimal_subdendrite_estimate(act, [L1, L2], 2)
    assert not est.agree
