"""The end compactification of the Cayley tree of a free group.

Vertices are reduced words, edge points are ``(word, letter, t)`` on the edge
from ``word`` to ``word + letter`` (which must lengthen the word), and ends
are eventually periodic infinite reduced words ``prefix + period**inf``.
Letters come from ``xyzwvu...``; an uppercase letter is the inverse.

Closed connected subsets are finite intersections of *primitives*
``Piece(gate, dirs)``: the gate point together with the branches at the gate
in the listed directions.  At a vertex the directions are letters; at an
edge point they are ``+`` (toward ``word + letter``) and ``-``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .tree import InputError

LETTERS = "xyzwvutsrqponmlkjihgfedcba"


def inv_letter(a: str) -> str:
    return a.lower() if a.isupper() else a.upper()


def inverse(w: str) -> str:
    return "".join(inv_letter(a) for a in reversed(w))


def reduce(w: str) -> str:
    out: list[str] = []
    for a in w:
        if out and out[-1] == inv_letter(a):
            out.pop()
        else:
            out.append(a)
    return "".join(out)


def mul(*ws: str) -> str:
    return reduce("".join(ws))


def is_reduced(w: str) -> bool:
    return all(b != inv_letter(a) for a, b in zip(w, w[1:]))


@dataclass(frozen=True)
class SVertex:
    word: str

    def __str__(self) -> str:
        return f"w:{self.word or '1'}"


@dataclass(frozen=True)
class SEdge:
    word: str
    letter: str
    t: Fraction

    def __str__(self) -> str:
        return f"w:{self.word or '1'}:{self.letter}:{self.t.numerator}/{self.t.denominator}"


@dataclass(frozen=True)
class SEnd:
    prefix: str
    period: str

    def __str__(self) -> str:
        return f"end:{self.prefix or '1'}:{self.period}"

    def letters(self, n: int) -> str:
        """The first ``n`` letters of the infinite word."""
        s = self.prefix
        while len(s) < n:
            s += self.period
        return s[:n]


SPoint = Union[SVertex, SEdge, SEnd]


def spoint_key(p: SPoint) -> tuple:
    if isinstance(p, SVertex):
        return (0, len(p.word), p.word)
    if isinstance(p, SEdge):
        return (1, len(p.word), p.word, p.letter, p.t)
    return (2, p.prefix, p.period)


class FreeTree:
    """The compactified Cayley tree of the free group of rank ``m``."""

    def __init__(self, m: int):
        if not 1 <= m <= len(LETTERS):
            raise InputError(f"rank must be between 1 and {len(LETTERS)}")
        self.m = m
        self.basis = LETTERS[:m]
        # breadth-first order of letters: x, X, y, Y, ...
        self.alphabet = tuple(c for a in self.basis for c in (a, a.upper()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeTree) and other.m == self.m

    def __hash__(self) -> int:
        return hash(("FreeTree", self.m))

    # -- construction and validation --------------------------------------

    def check_word(self, w: str) -> str:
        if any(a not in self.alphabet for a in w):
            raise InputError(f"word {w!r} uses letters outside {''.join(self.alphabet)}")
        if not is_reduced(w):
            raise InputError(f"word {w!r} is not reduced")
        return w

    def vertex(self, w: str) -> SVertex:
        return SVertex(self.check_word(w))

    def edge_point(self, w: str, a: str, t) -> SPoint:
        t = Fraction(t)
        self.check_word(w)
        if a not in self.alphabet:
            raise InputError(f"unknown letter {a!r}")
        if t == 0:
            return SVertex(w)
        if t == 1:
            return SVertex(mul(w, a))
        if not 0 < t < 1:
            raise InputError(f"parameter {t} outside [0, 1]")
        if w and w[-1] == inv_letter(a):
            return SEdge(w[:-1], w[-1], 1 - t)
        return SEdge(w, a, t)

    def end(self, prefix: str, period: str) -> SEnd:
        self.check_word(prefix)
        self.check_word(period)
        if not period:
            raise InputError("an end needs a nonempty period")
        if not is_reduced(prefix + period + period):
            raise InputError(f"{prefix}({period})^inf is not reduced")
        n = len(period)
        for d in range(1, n + 1):
            if n % d == 0 and period[:d] * (n // d) == period:
                period = period[:d]
                break
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        return SEnd(prefix, period)

    def ray(self, a: str) -> SEnd:
        return self.end("", a)

    def check_point(self, p: SPoint) -> SPoint:
        if isinstance(p, SVertex):
            self.check_word(p.word)
        elif isinstance(p, SEdge):
            if self.edge_point(p.word, p.letter, p.t) != p:
                raise InputError(f"edge point {p} is not canonical")
        elif isinstance(p, SEnd):
            if self.end(p.prefix, p.period) != p:
                raise InputError(f"end {p} is not canonical")
        else:
            raise InputError(f"not a point of the Cayley tree: {p!r}")
        return p

    # -- the action ---------------------------------------------------------

    def act(self, g: str, p: SPoint) -> SPoint:
        """Left multiplication by the reduced word ``g``."""
        if isinstance(p, SVertex):
            return SVertex(mul(g, p.word))
        if isinstance(p, SEdge):
            return self.edge_point(mul(g, p.word), p.letter, p.t)
        copies = len(g) // len(p.period) + 2
        return self.end(mul(g, p.prefix, p.period * copies), p.period)

    # -- local structure ------------------------------------------------------

    def directions(self, c: SPoint) -> tuple[str, ...]:
        if isinstance(c, SVertex):
            return self.alphabet
        if isinstance(c, SEdge):
            return ("+", "-")
        raise InputError("ends carry no directions")

    def direction(self, c: SPoint, x: SPoint) -> str | None:
        """Direction at the finite point ``c`` toward ``x`` (None if equal)."""
        if isinstance(c, SEnd):
            raise InputError("ends carry no directions")
        y = self.act(inverse(c.word), x)
        if isinstance(c, SVertex):
            if isinstance(y, SVertex):
                return y.word[0] if y.word else None
            if isinstance(y, SEdge):
                return y.word[0] if y.word else y.letter
            return y.letters(1)
        s = c.letter
        if isinstance(y, SVertex):
            return "+" if y.word[:1] == s else "-"
        if isinstance(y, SEdge):
            if y.word == "" and y.letter == s:
                if y.t == c.t:
                    return None
                return "+" if y.t > c.t else "-"
            return "+" if y.word[:1] == s else "-"
        return "+" if y.letters(1) == s else "-"

    def neighbor(self, c: SPoint, d: str) -> SVertex:
        """A vertex lying in the branch at ``c`` in direction ``d``."""
        if isinstance(c, SVertex):
            return SVertex(mul(c.word, d))
        return SVertex(c.word + c.letter) if d == "+" else SVertex(c.word)

    def anchors(self, p: SPoint) -> list[str]:
        if isinstance(p, SVertex):
            return [p.word]
        if isinstance(p, SEdge):
            return [p.word, p.word + p.letter]
        raise InputError("ends have no anchors")

    @staticmethod
    def vertex_distance(a: str, b: str) -> int:
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        return len(a) + len(b) - 2 * k

    @staticmethod
    def vertex_path(a: str, b: str) -> list[str]:
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        down = [a[:i] for i in range(len(a), k - 1, -1)]
        up = [b[:i] for i in range(k + 1, len(b) + 1)]
        return down + up

    def vertices_between(self, p: SPoint, q: SPoint) -> list[str]:
        """Vertices strictly inside the arc between two finite points."""
        if p == q:
            return []
        if isinstance(p, SEdge) and isinstance(q, SEdge) and (p.word, p.letter) == (q.word, q.letter):
            return []
        best = min(
            ((self.vertex_distance(a, b), a, b) for a in self.anchors(p) for b in self.anchors(q)),
        )
        path = self.vertex_path(best[1], best[2])
        return [w for w in path if SVertex(w) not in (p, q)]


# -- closed connected subsets -------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """The gate plus the branches at the gate in the directions ``dirs``."""

    gate: SPoint
    dirs: frozenset[str]

    def __str__(self) -> str:
        return f"{self.gate}[{''.join(sorted(self.dirs))}]"


@dataclass(frozen=True)
class Convex:
    """Intersection of finitely many pieces; no pieces means the whole space."""

    pieces: frozenset[Piece]

    def __str__(self) -> str:
        if not self.pieces:
            return "all"
        return " & ".join(sorted(str(p) for p in self.pieces))


WHOLE = Convex(frozenset())


def cone(T: FreeTree, c: SPoint, d: str) -> Convex:
    """Closure of the branch at ``c`` in direction ``d``."""
    return convex(T, [Piece(c, frozenset({d}))])


def cocone(T: FreeTree, c: SPoint, d: str) -> Convex:
    """Closure of the complement of the branch at ``c`` in direction ``d``."""
    return convex(T, [Piece(c, frozenset(T.directions(c)) - {d})])


def cylinder(T: FreeTree, w: str) -> Convex:
    """Points and ends whose reduced word begins with ``w``."""
    T.check_word(w)
    if not w:
        return WHOLE
    return cocone(T, SVertex(w), inv_letter(w[-1]))


def u_side(T: FreeTree, s: SPoint, t: SPoint) -> Convex:
    d = T.direction(s, t)
    if d is None:
        raise InputError("u_side needs distinct points")
    return cone(T, s, d)


def singleton(T: FreeTree, c: SPoint) -> Convex:
    return convex(T, [Piece(c, frozenset())])


def convex(T: FreeTree, pieces: Iterable[Piece]) -> Convex:
    keep = set()
    for P in pieces:
        T.check_point(P.gate)
        full = frozenset(T.directions(P.gate))
        if not P.dirs <= full:
            raise InputError(f"bad directions at {P.gate}")
        if P.dirs != full:
            keep.add(P)
    return Convex(frozenset(keep))


def intersect(*sets: Convex) -> Convex:
    return Convex(frozenset().union(*(S.pieces for S in sets)))


def piece_contains(T: FreeTree, P: Piece, x: SPoint) -> bool:
    d = T.direction(P.gate, x)
    return d is None or d in P.dirs


def contains(T: FreeTree, S: Convex, x: SPoint) -> bool:
    return all(piece_contains(T, P, x) for P in S.pieces)


def _pieces_disjoint(T: FreeTree, P: Piece, Q: Piece) -> bool:
    if P.gate == Q.gate:
        return False
    return not piece_contains(T, P, Q.gate) and not piece_contains(T, Q, P.gate)


def disjoint(T: FreeTree, A: Convex, B: Convex) -> bool:
    """Exact: subtrees with pairwise nonempty intersections have a common point."""
    ps = sorted(A.pieces | B.pieces, key=str)
    return any(_pieces_disjoint(T, P, Q) for i, P in enumerate(ps) for Q in ps[i + 1 :])


def _germ_inside(T: FreeTree, A: Convex, c: SPoint, d: str) -> bool:
    """Whether ``A`` contains points arbitrarily close to ``c`` in direction ``d``."""
    if contains(T, A, c):
        return all(P.gate != c or d in P.dirs for P in A.pieces)
    return not disjoint(T, A, cone(T, c, d))


def is_subset(T: FreeTree, A: Convex, B: Convex) -> bool:
    for Q in B.pieces:
        for d in T.directions(Q.gate):
            if d not in Q.dirs and _germ_inside(T, A, Q.gate, d):
                return False
    return True


def image(T: FreeTree, g: str, S: Convex) -> Convex:
    out = []
    for P in S.pieces:
        c = T.act(g, P.gate)
        dirs = frozenset(T.direction(c, T.act(g, T.neighbor(P.gate, d))) for d in P.dirs)
        out.append(Piece(c, dirs))
    return convex(T, out)


def arc_complement_guard(T: FreeTree, p: SPoint, q: SPoint) -> Convex:
    """``U_p(q') | [p, q] | U_q(p')``: everything except the branches hanging
    off the open arc between ``p`` and ``q``."""
    out = []
    for w in T.vertices_between(p, q):
        v = SVertex(w)
        on_arc = {T.direction(v, p), T.direction(v, q)}
        out += [Piece(v, frozenset(T.directions(v)) - {d}) for d in T.directions(v) if d not in on_arc]
    return convex(T, out)


# -- elements ----------------------------------------------------------------


def cyclic_decomposition(g: str) -> tuple[str, str]:
    """``g = u c u^-1`` with ``c`` cyclically reduced."""
    u = ""
    while len(g) >= 2 and g[0] == inv_letter(g[-1]):
        u += g[0]
        g = g[1:-1]
    return u, g


def fixed_ends(T: FreeTree, g: str) -> list[SEnd] | None:
    """Fixed points of a group element; ``None`` means everything is fixed.

    A nontrivial element fixes no vertex or edge point, and exactly the two
    ends ``u c^{+inf}`` and ``u c^{-inf}``.
    """
    if not g:
        return None
    u, c = cyclic_decomposition(g)
    ends = {T.end(u, c), T.end(u, inverse(c))}
    return sorted(ends, key=spoint_key)


def words_up_to(alphabet: tuple[str, ...], L: int, start: int = 0) -> Iterator[str]:
    """Reduced words by length, then lexicographically in alphabet order."""
    level = [""]
    for n in range(0, L + 1):
        if n >= start:
            yield from level
        level = [w + a for w in level for a in alphabet if not w or w[-1] != inv_letter(a)]


# -- measures ------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicMeasure:
    """Atoms on vertices plus ``boundary`` times the uniform measure on ends."""

    atoms: tuple[tuple[str, Fraction], ...]
    boundary: Fraction

    @classmethod
    def make(cls, T: FreeTree, atoms=None, boundary=0) -> "SymbolicMeasure":
        at: dict[str, Fraction] = {}
        for w, m in (atoms or {}).items():
            T.check_word(w)
            m = Fraction(m)
            if m <= 0:
                raise InputError(f"atom at {w!r} has non-positive mass")
            at[w] = at.get(w, Fraction(0)) + m
        boundary = Fraction(boundary)
        if boundary < 0:
            raise InputError("negative boundary mass")
        if sum(at.values(), Fraction(0)) + boundary != 1:
            raise InputError("total mass must be 1")
        return cls(tuple(sorted(at.items(), key=lambda kv: (len(kv[0]), kv[0]))), boundary)


def cylinder_mass(T: FreeTree, w: str) -> Fraction:
    """Uniform end measure of the cylinder of a reduced word."""
    if not w:
        return Fraction(1)
    return Fraction(1, 2 * T.m * (2 * T.m - 1) ** (len(w) - 1))


def _branch_end_mass(T: FreeTree, c: SPoint, d: str) -> Fraction:
    if isinstance(c, SVertex):
        w = c.word
        if w and d == inv_letter(w[-1]):
            return 1 - cylinder_mass(T, w)
        return cylinder_mass(T, w + d)
    full = c.word + c.letter
    return cylinder_mass(T, full) if d == "+" else 1 - cylinder_mass(T, full)


def piece_mass(T: FreeTree, mu: SymbolicMeasure, P: Piece) -> Fraction:
    total = sum((m for w, m in mu.atoms if piece_contains(T, P, SVertex(w))), Fraction(0))
    if mu.boundary:
        total += mu.boundary * sum((_branch_end_mass(T, P.gate, d) for d in P.dirs), Fraction(0))
    return total


def mass(T: FreeTree, mu: SymbolicMeasure, S: Convex) -> Fraction:
    """Exact mass of a set given by at most one piece."""
    if not S.pieces:
        return Fraction(1)
    if len(S.pieces) > 1:
        raise InputError("mass is only implemented for single pieces")
    return piece_mass(T, mu, next(iter(S.pieces)))


def pushed_mass(T: FreeTree, mu: SymbolicMeasure, g: str, S: Convex) -> Fraction:
    """``(g_* mu)(S) = mu(g^-1 S)``."""
    return mass(T, mu, image(T, inverse(g), S))


def parse_spoint(T: FreeTree, text: str) -> SPoint:
    """``w:<word>``, ``w:<word>:<letter>:<num>/<den>`` or ``end:<prefix>:<period>``;
    the empty word is written ``1``."""
    parts = text.split(":")

    def word(s: str) -> str:
        return "" if s == "1" else s

    try:
        if parts[0] == "w" and len(parts) == 2:
            return T.vertex(word(parts[1]))
        if parts[0] == "w" and len(parts) == 4:
            return T.edge_point(word(parts[1]), parts[2], Fraction(parts[3]))
        if parts[0] == "end" and len(parts) == 3:
            return T.end(word(parts[1]), parts[2])
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad symbolic point {text!r}: {exc}") from None
    raise InputError(f"bad symbolic point {text!r}")
