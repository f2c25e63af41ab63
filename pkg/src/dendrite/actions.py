"""Finitely generated group actions on dendrites.

Two backends share one interface: generator homeomorphisms of a finite tree
(:class:`PLAction`), where every action is elementary, and the free group
acting on its compactified Cayley tree (:class:`SymbolicAction`).  On top of
them sit the elementarity certificate, the move-off search, the ping-pong
free-pair construction, strong-proximality pushing and the orbit-hull
estimate of the minimal invariant sub-dendrite.

Word searches are breadth first: by length, then lexicographically with the
generator order ``g1, g1^-1, g2, g2^-1, ...``.  Elements that already
appeared earlier in the search are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from . import subsets as ss
from . import symbolic as sy
from .dynamics import PLHomeo, fixed_set
from .tree import Dendrite, InputError, Vertex, point_key

Word = tuple[tuple[int, int], ...]


class Failure(str):
    """A search or construction that did not succeed; carries the reason."""


# -- backends -----------------------------------------------------------------


class Action:
    """Common interface; subclasses supply the group and the space."""

    kind = ""
    names: list[str]

    # group
    def generator(self, i: int): ...
    def identity(self): ...
    def mul(self, a, b): ...
    def inv(self, a): ...
    def key(self, a): ...

    # space
    def apply(self, g, p): ...
    def image(self, g, S): ...
    def disjoint(self, A, B) -> bool: ...
    def subset(self, A, B) -> bool: ...
    def contains(self, S, p) -> bool: ...
    def is_whole(self, S) -> bool: ...
    def is_empty(self, S) -> bool: ...
    def complement_closure(self, S): ...
    def u_side(self, s, t): ...
    def guard(self, p, x, q, y): ...
    def base_point(self): ...
    def point_str(self, p) -> str: ...
    def set_str(self, S) -> str: ...

    # -- shared word machinery ---------------------------------------------

    def evaluate(self, word: Word):
        out = self.identity()
        for i, s in word:
            g = self.generator(i)
            out = self.mul(out, g if s > 0 else self.inv(g))
        return out

    def words(self, L: int, start: int = 1) -> Iterator[tuple[Word, object]]:
        """Reduced generator words of length ``start..L``, skipping repeats of
        an element already produced."""
        symbols = [(i, s) for i in range(len(self.names)) for s in (1, -1)]
        seen = {self.key(self.identity())}
        level: list[tuple[Word, object]] = [((), self.identity())]
        for n in range(1, L + 1):
            nxt = []
            for w, g in level:
                for sym in symbols:
                    if w and w[-1] == (sym[0], -sym[1]):
                        continue
                    gen = self.generator(sym[0])
                    h = self.mul(g, gen if sym[1] > 0 else self.inv(gen))
                    nxt.append((w + (sym,), h))
            level = []
            for w, h in nxt:
                k = self.key(h)
                if k in seen:
                    continue
                seen.add(k)
                level.append((w, h))
                if n >= start:
                    yield w, h

    def format_word(self, word: Word) -> str:
        if not word:
            return "1"
        if all(len(n) == 1 and n.islower() for n in self.names):
            return "".join(self.names[i] if s > 0 else self.names[i].upper() for i, s in word)
        return ".".join(self.names[i] if s > 0 else f"{self.names[i]}^-1" for i, s in word)

    def invert_word(self, word: Word) -> Word:
        return tuple((i, -s) for i, s in reversed(word))

    @staticmethod
    def reduce_word(word: Word) -> Word:
        out: list[tuple[int, int]] = []
        for i, s in word:
            if out and out[-1] == (i, -s):
                out.pop()
            else:
                out.append((i, s))
        return tuple(out)

    def search(self, ok: Callable[[object], bool], L: int) -> tuple[Word, object] | None:
        for w, g in self.words(L):
            if ok(g):
                return w, g
        return None


class PLAction(Action):
    kind = "pl"

    def __init__(self, X: Dendrite, gens: Sequence[tuple[str, PLHomeo]]):
        self.X = X
        self.names = [n for n, _ in gens]
        self.gens = [g for _, g in gens]
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate generator names")
        for g in self.gens:
            if g.X != X:
                raise InputError("generator lives on a different tree")

    def generator(self, i):
        return self.gens[i]

    def identity(self):
        return PLHomeo.identity(self.X)

    def mul(self, a, b):
        return a.compose(b)

    def inv(self, a):
        return a.inverse()

    def key(self, a):
        return a.key

    def apply(self, g, p):
        return g.apply(p)

    def image(self, g, S):
        return g.image_set(S)

    def disjoint(self, A, B):
        return ss.intersection(self.X, A, B).is_empty

    def subset(self, A, B):
        return ss.is_subset(self.X, A, B)

    def contains(self, S, p):
        return ss.contains(self.X, S, p)

    def is_whole(self, S):
        return S == ss.whole(self.X)

    def is_empty(self, S):
        return S.is_empty

    def complement_closure(self, S):
        return ss.complement_closure(self.X, S)

    def u_side(self, s, t):
        return ss.u_side(self.X, s, t)

    def guard(self, p, x, q, y):
        X = self.X
        return ss.union(X, ss.u_side(X, p, x), ss.u_side(X, q, y), ss.arc(X, p, q).carrier)

    def base_point(self):
        return Vertex(min(self.X.vertices))

    def point_str(self, p):
        return str(p)

    def set_str(self, S):
        if S.is_empty:
            return "empty"
        toks = [f"v:{v}" for v in sorted(S.vertices)]
        toks += [f"i:{e}:{a.numerator}/{a.denominator}:{b.numerator}/{b.denominator}" for e, ivs in S.intervals for a, b in ivs]
        return " ".join(toks)


class SymbolicAction(Action):
    kind = "symbolic"

    def __init__(self, T: sy.FreeTree, gens: Sequence[tuple[str, str]]):
        self.T = T
        self.names = [n for n, _ in gens]
        self.gens = [T.check_word(sy.reduce(w)) for _, w in gens]
        if len(set(self.names)) != len(self.names):
            raise InputError("duplicate generator names")

    @classmethod
    def free(cls, m: int) -> "SymbolicAction":
        """The free group acting on its own Cayley tree by left multiplication."""
        T = sy.FreeTree(m)
        return cls(T, [(a, a) for a in T.basis])

    def generator(self, i):
        return self.gens[i]

    def identity(self):
        return ""

    def mul(self, a, b):
        return sy.mul(a, b)

    def inv(self, a):
        return sy.inverse(a)

    def key(self, a):
        return a

    def apply(self, g, p):
        return self.T.act(g, p)

    def image(self, g, S):
        return sy.image(self.T, g, S)

    def disjoint(self, A, B):
        return sy.disjoint(self.T, A, B)

    def subset(self, A, B):
        return sy.is_subset(self.T, A, B)

    def contains(self, S, p):
        return sy.contains(self.T, S, p)

    def is_whole(self, S):
        return not S.pieces

    def is_empty(self, S):
        # a finite intersection of pieces is empty iff two pieces are disjoint
        return sy.disjoint(self.T, S, S)

    def complement_closure(self, S):
        if len(S.pieces) != 1:
            raise InputError("complement closure is only implemented for single pieces")
        P = next(iter(S.pieces))
        if not P.dirs:
            return sy.WHOLE
        return sy.convex(self.T, [sy.Piece(P.gate, frozenset(self.T.directions(P.gate)) - P.dirs)])

    def u_side(self, s, t):
        return sy.u_side(self.T, s, t)

    def guard(self, p, x, q, y):
        return sy.arc_complement_guard(self.T, p, q)

    def base_point(self):
        return sy.SVertex("")

    def point_str(self, p):
        return str(p)

    def set_str(self, S):
        return str(S)

    def search_map(self, A, B, L: int) -> tuple[Word, str] | None:
        """A word ``g`` with ``g(A) <= B``: plain breadth-first search, then the
        same search conjugated by the word of the gate of ``B``."""
        found = self.search(lambda g: self.subset(self.image(g, A), B), L)
        if found is not None or len(B.pieces) != 1:
            return found
        u = next(iter(B.pieces)).gate.word
        uinv = sy.inverse(u)
        A0, B0 = self.image(uinv, A), self.image(uinv, B)
        found = self.search(lambda c: self.subset(self.image(c, A0), B0), L)
        if found is None:
            return None
        w, c = found
        return self.reduce_word(self.word_of(u) + w + self.word_of(uinv)), sy.mul(u, c, uinv)

    def word_of(self, element: str) -> Word:
        """Generator word for a reduced word when the generators are the basis."""
        index = {g: i for i, g in enumerate(self.gens)}
        out = []
        for a in element:
            if a in index:
                out.append((index[a], 1))
            elif a.lower() in index:
                out.append((index[a.lower()], -1))
            else:
                raise InputError("conjugated search needs the basis letters as generators")
        return tuple(out)


def _search_map(act: Action, A, B, L: int):
    if isinstance(act, SymbolicAction):
        return act.search_map(A, B, L)
    return act.search(lambda g: act.subset(act.image(g, A), B), L)


# -- elementarity -------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    kind: str  # FixedPoint | InvariantPair | FiniteOrbit | Unknown
    points: tuple = ()

    def __str__(self) -> str:
        return self.kind


def _common_fixed(act: Action):
    if isinstance(act, PLAction):
        F = ss.whole(act.X)
        for g in act.gens:
            F = ss.intersection(act.X, F, fixed_set(g))
        return None if F.is_empty else ss.some_point(act.X, F)
    common = None
    for g in act.gens:
        ends = sy.fixed_ends(act.T, g)
        if ends is None:
            continue
        common = set(ends) if common is None else common & set(ends)
    if common is None:
        return act.base_point()
    if not common:
        return None
    return min(common, key=sy.spoint_key)


def _candidate_vertices(act: Action, L: int) -> list:
    if isinstance(act, PLAction):
        return sorted((Vertex(v) for v in act.X.vertices), key=point_key)
    return [sy.SVertex(w) for w in sy.words_up_to(act.T.alphabet, L)]


def orbit(act: Action, p, cap: int) -> list | None:
    """The orbit of ``p`` under the group, or None when it exceeds ``cap``."""
    seen = {p}
    frontier = [p]
    gens = [g for g in (act.generator(i) for i in range(len(act.names)))]
    moves = gens + [act.inv(g) for g in gens]
    while frontier:
        nxt = []
        for q in frontier:
            for g in moves:
                r = act.apply(g, q)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
                    if len(seen) > cap:
                        return None
        frontier = nxt
    return list(seen)


def elementarity_certificate(act: Action, L: int, orbit_cap: int = 64) -> Verdict:
    """Certify a fixed point, an invariant pair or a finite orbit.

    ``Unknown`` only means nothing was found within the search limits.
    """
    p = _common_fixed(act)
    if p is not None:
        return Verdict("FixedPoint", (p,))
    key = point_key if isinstance(act, PLAction) else sy.spoint_key
    for v in _candidate_vertices(act, L):
        orb = orbit(act, v, orbit_cap)
        if orb is None:
            continue
        orb = tuple(sorted(orb, key=key))
        return Verdict("InvariantPair" if len(orb) == 2 else "FiniteOrbit", orb)
    return Verdict("Unknown")


# -- move-off -------------------------------------------------------------------


@dataclass(frozen=True)
class MoveOff:
    word: Word
    element: object


def move_off(act: Action, Y, L: int) -> MoveOff | Failure:
    """A group element moving ``Y`` off itself, checked exactly."""
    if act.is_empty(Y):
        raise InputError("move-off needs a nonempty set")
    if act.is_whole(Y):
        return Failure("the whole space cannot be moved off itself")
    found = act.search(lambda g: act.disjoint(act.image(g, Y), Y), L)
    if found is None:
        return Failure(f"no word of length <= {L} moves the set off itself")
    return MoveOff(*found)


# -- ping-pong ------------------------------------------------------------------


@dataclass(frozen=True)
class PingPongCertificate:
    a_word: Word
    b_word: Word
    a: object
    b: object
    a_minus: object
    a_plus: object
    b_minus: object
    b_plus: object
    anchors: tuple = ()

    def sets(self) -> dict[str, object]:
        return {"A-": self.a_minus, "A+": self.a_plus, "B-": self.b_minus, "B+": self.b_plus}


def _free_pair_setup(act: Action):
    """Two points ``x, y`` with a branch point ``r`` strictly between them, and
    regular points ``p`` on ``[x, r]`` and ``q`` on ``[r, y]``."""
    if isinstance(act, SymbolicAction):
        T = act.T
        ends = sorted((T.ray(a) for a in T.alphabet), key=lambda e: [T.alphabet.index(c) for c in e.letters(4)])
        x, y = ends[0], ends[1]
        # the arc between two rays from the identity passes through it
        r = sy.SVertex("")
        half = Fraction(1, 2)
        p = T.edge_point("", T.direction(r, x), half)
        q = T.edge_point("", T.direction(r, y), half)
        return x, y, r, p, q
    X = act.X
    leaves = [v for v in X.leaves()]
    for i, x in enumerate(leaves):
        for y in leaves[i + 1 :]:
            route = X.route(x, y)
            for k in range(1, len(route)):
                cut = X.point(route[k].edge, route[k].a)
                if X.order(cut) >= 3:
                    before, after = route[k - 1], route[k]
                    p = X.point(before.edge, (before.a + before.b) / 2)
                    q = X.point(after.edge, (after.a + after.b) / 2)
                    return x, y, cut, p, q
    return None


def find_free_pair(act: Action, L: int) -> PingPongCertificate | Failure:
    setup = _free_pair_setup(act)
    if setup is None:
        return Failure("no arc between ends contains a branch point")
    x, y, r, p, q = setup
    Upx, Upy = act.u_side(p, x), act.u_side(p, y)
    Uqx, Uqy = act.u_side(q, x), act.u_side(q, y)
    g = _search_map(act, Upy, Upx, L)
    if g is None:
        return Failure(f"no g of length <= {L} with g(U_p(y)) inside U_p(x)")
    h = _search_map(act, Uqx, Uqy, L)
    if h is None:
        return Failure(f"no h of length <= {L} with h(U_q(x)) inside U_q(y)")
    a_word = act.reduce_word(h[0] + g[0])
    a = act.mul(h[1], g[1])
    a_minus = Upx
    a_plus = act.image(a, Upy)
    Y = act.guard(p, x, q, y)
    f = act.search(lambda f: act.disjoint(act.image(f, Y), Y), L)
    if f is None:
        return Failure(f"no f of length <= {L} moves U_p(x) | [p,q] | U_q(y) off itself")
    f_word, fe = f
    b_word = act.reduce_word(f_word + a_word + act.invert_word(f_word))
    b = act.mul(act.mul(fe, a), act.inv(fe))
    cert = PingPongCertificate(
        a_word, b_word, a, b, a_minus, a_plus, act.image(fe, a_minus), act.image(fe, a_plus), (x, y, r, p, q)
    )
    if not verify_pingpong(act, cert):
        raise AssertionError("constructed certificate failed verification")
    return cert


def verify_pingpong(act: Action, cert: PingPongCertificate) -> bool:
    """Exact check of disjointness and of ``a^{+-1}(X - A_-+) <= A_+-``.

    The inclusions are tested on closures, which is equivalent since the
    targets are closed.
    """
    sets = list(cert.sets().values())
    if any(act.is_empty(S) for S in sets):
        return False
    for i, S in enumerate(sets):
        for T in sets[i + 1 :]:
            if not act.disjoint(S, T):
                return False
    for g, minus, plus in ((cert.a, cert.a_minus, cert.a_plus), (cert.b, cert.b_minus, cert.b_plus)):
        if not act.subset(act.image(g, act.complement_closure(minus)), plus):
            return False
        if not act.subset(act.image(act.inv(g), act.complement_closure(plus)), minus):
            return False
    return True


def pair_relations(act: Action, cert: PingPongCertificate, length: int = 6) -> tuple[int, list[str]]:
    """Check every nonempty reduced word in ``a, b`` up to ``length`` against
    the base point; returns the number of words and those fixing it."""
    base = act.base_point()
    letters = [(cert.a, "a"), (act.inv(cert.a), "A"), (cert.b, "b"), (act.inv(cert.b), "B")]
    inverse_of = {"a": "A", "A": "a", "b": "B", "B": "b"}
    checked = 0
    bad = []
    level = [("", act.identity())]
    for _ in range(length):
        nxt = []
        for w, g in level:
            for h, name in letters:
                if w and w[-1] == inverse_of[name]:
                    continue
                e = act.mul(g, h)
                nxt.append((w + name, e))
                checked += 1
                if act.apply(e, base) == base:
                    bad.append(w + name)
        level = nxt
    return checked, bad


# -- strong proximality ----------------------------------------------------------


@dataclass(frozen=True)
class ProxStep:
    n: int
    word: Word
    element: str
    x_n: object
    y_n: object
    z_n: object
    mass: Fraction


@dataclass
class ProxResult:
    steps: list[ProxStep] = field(default_factory=list)
    failure: Failure | None = None


def proximality_push(
    act: SymbolicAction,
    mu: sy.SymbolicMeasure,
    target: sy.SEnd,
    N: int,
    L: int,
    max_ray: int = 64,
) -> ProxResult:
    """Push ``mu`` toward the end ``target`` along ``h_n g_n``.

    For step ``n``: ``x_n`` is the midpoint of the ``n``-th edge of the ray
    to ``target``; ``y_n`` leaves that ray after ``n - 1`` letters along the
    first admissible letter; ``z_n`` is the first edge midpoint on the way to
    ``y_n`` with ``mu(U_{z_n}(y_n)) <= 1/n``.  ``g_n`` maps ``U_{z_n}(target)``
    into ``U_{z_n}(y_n)`` and ``h_n`` maps ``U_{x_n}(y_n)`` into
    ``U_{x_n}(target)``.  The action is assumed to have no proper invariant
    sub-dendrite; this is not checked.
    """
    if not isinstance(act, SymbolicAction):
        raise InputError("proximality pushing needs the symbolic backend")
    T = act.T
    T.check_point(target)
    half = Fraction(1, 2)
    result = ProxResult()
    for n in range(1, N + 1):
        ray = target.letters(n + 1)
        stem = ray[: n - 1]
        banned = {ray[n - 1], sy.inv_letter(ray[n - 1])}
        if stem:
            banned.add(sy.inv_letter(stem[-1]))
        side = next(c for c in T.alphabet if c not in banned)
        y_n = T.end(stem, side)
        x_n = T.edge_point(ray[:n], ray[n], half)
        z_n = None
        for j in range(max_ray):
            z = T.edge_point(stem + side * j, side, half)
            if sy.mass(T, mu, sy.u_side(T, z, y_n)) <= Fraction(1, n):
                z_n = z
                break
        if z_n is None:
            result.failure = Failure(f"step {n}: no midpoint toward y_n with small mass")
            return result
        g = act.search_map(sy.u_side(T, z_n, target), sy.u_side(T, z_n, y_n), L)
        if g is None:
            result.failure = Failure(f"step {n}: no g_n found")
            return result
        h = act.search_map(sy.u_side(T, x_n, y_n), sy.u_side(T, x_n, target), L)
        if h is None:
            result.failure = Failure(f"step {n}: no h_n found")
            return result
        w = sy.mul(h[1], g[1])
        pushed = sy.pushed_mass(T, mu, w, sy.u_side(T, x_n, target))
        result.steps.append(ProxStep(n, act.reduce_word(h[0] + g[0]), w, x_n, y_n, z_n, pushed))
    return result


# -- minimal invariant sub-dendrite ------------------------------------------------


@dataclass(frozen=True)
class MinimalEstimate:
    seeds: tuple
    hulls: tuple
    agree: bool


def _orbit_points(act: Action, p, L: int) -> list:
    pts = {p}
    for _, g in act.words(L):
        pts.add(act.apply(g, p))
    return list(pts)


def _meets(act: Action, A, B) -> bool:
    if isinstance(act, PLAction):
        return not ss.intersection(act.X, A, B).is_empty
    return bool(A & B)


def minimal_subdendrite_estimate(act: Action, seeds: Sequence, L: int) -> MinimalEstimate:
    """Hull of the depth-``L`` orbit of each seed; the estimates agree when
    every two of them meet."""
    if not seeds:
        raise InputError("at least one seed is needed")
    hulls = []
    for s in seeds:
        pts = _orbit_points(act, s, L)
        if isinstance(act, PLAction):
            hulls.append(ss.hull(act.X, pts))
        else:
            if not all(isinstance(p, sy.SVertex) for p in pts):
                raise InputError("symbolic orbit hulls need vertex seeds")
            root = pts[0].word
            verts = set()
            for p in pts:
                verts.update(sy.FreeTree.vertex_path(root, p.word))
            hulls.append(frozenset(verts))
    agree = all(_meets(act, A, B) for i, A in enumerate(hulls) for B in hulls[i + 1 :])
    return MinimalEstimate(tuple(seeds), tuple(hulls), agree)
