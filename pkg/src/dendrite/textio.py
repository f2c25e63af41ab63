"""Line-oriented text formats for trees, points, sets, measures, maps and actions.

Every file is a sequence of ``keyword arg ...`` lines; ``#`` starts a comment.
Parse errors raise :class:`ParseError` naming the line and offending token.
Each ``format_*`` function produces text that the matching parser reads back
to an equal value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator

from . import subsets as ss
from . import symbolic as sy
from .cocycle import CocycleValue
from .dynamics import PLHomeo, PLMap
from .measures import TreeMeasure
from .subsets import ClosedSet
from .tree import Dendrite, Germ, InputError, Point, Vertex


class ParseError(InputError):
    def __init__(self, line: int, token: str, message: str, source: str = "<input>"):
        super().__init__(f"{source}:{line}: {message} (token {token!r})")
        self.line = line
        self.token = token


@dataclass(frozen=True)
class Record:
    line: int
    keyword: str
    args: tuple[str, ...]
    source: str = "<input>"

    def fail(self, token: str, message: str) -> ParseError:
        return ParseError(self.line, token, message, self.source)

    def expect(self, n: int) -> tuple[str, ...]:
        if len(self.args) != n:
            token = self.args[n] if len(self.args) > n else self.keyword
            raise self.fail(token, f"{self.keyword!r} takes {n} argument(s)")
        return self.args


def records(text: str, source: str = "<input>") -> Iterator[Record]:
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            kw, *args = line.split()
            yield Record(i, kw, tuple(args), source)


def fraction(token: str, rec: Record | None = None) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        if rec is None:
            raise InputError(f"not a rational number: {token!r}") from None
        raise rec.fail(token, "not a rational number") from None


def fmt(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- trees ----------------------------------------------------------------------

TREE_KEYWORDS = ("vertex", "edge")


def tree_from_records(recs: list[Record]) -> Dendrite:
    verts: list[str] = []
    edges: dict[str, tuple] = {}
    first = None
    for r in recs:
        first = first or r
        if r.keyword == "vertex":
            (v,) = r.expect(1)
            if v in verts:
                raise r.fail(v, "duplicate vertex")
            verts.append(v)
        elif r.keyword == "edge":
            e, a, b, length = r.expect(4)
            if e in edges:
                raise r.fail(e, "duplicate edge")
            for v in (a, b):
                if v not in verts:
                    raise r.fail(v, "edge uses an undeclared vertex")
            edges[e] = (a, b, fraction(length, r))
    if not verts:
        raise ParseError(first.line if first else 1, "", "no vertices declared", recs[0].source if recs else "<input>")
    try:
        return Dendrite(verts, edges)
    except InputError as exc:
        last = recs[-1]
        raise last.fail(last.keyword, str(exc)) from None


def parse_tree(text: str, source: str = "<input>") -> Dendrite:
    recs = list(records(text, source))
    for r in recs:
        if r.keyword not in TREE_KEYWORDS:
            raise r.fail(r.keyword, "unknown keyword in tree file")
    return tree_from_records(recs)


def format_tree(X: Dendrite) -> str:
    lines = [f"vertex {v}" for v in sorted(X.vertices)]
    lines += [f"edge {e} {u} {v} {fmt(length)}" for e, (u, v, length) in sorted(X.edges.items())]
    return "\n".join(lines) + "\n"


# -- points and sets --------------------------------------------------------------


def parse_point(X: Dendrite, token: str, rec: Record | None = None) -> Point:
    """``v:<id>`` or ``e:<id>:<num>/<den>``."""
    parts = token.split(":")
    try:
        if parts[0] == "v" and len(parts) == 2:
            return X.check_point(Vertex(parts[1]))
        if parts[0] == "e" and len(parts) == 3:
            return X.point(parts[1], fraction(parts[2], rec))
    except ParseError:
        raise
    except InputError as exc:
        if rec is None:
            raise
        raise rec.fail(token, str(exc)) from None
    if rec is None:
        raise InputError(f"bad point {token!r}")
    raise rec.fail(token, "bad point (expected v:<id> or e:<id>:<num>/<den>)")


def format_germ(g: Germ) -> str:
    return str(g)


def parse_germ(token: str) -> Germ:
    if len(token) < 2 or token[-1] not in "+-":
        raise InputError(f"bad germ {token!r}")
    return Germ(token[:-1], 1 if token[-1] == "+" else -1)


def format_set(S: ClosedSet) -> str:
    """Space-separated ``v:<id>`` and ``i:<edge>:<a>:<b>`` tokens, or ``empty``."""
    if S.is_empty:
        return "empty"
    toks = [f"v:{v}" for v in sorted(S.vertices)]
    toks += [f"i:{e}:{fmt(a)}:{fmt(b)}" for e, ivs in S.intervals for a, b in ivs]
    return " ".join(toks)


def parse_set(X: Dendrite, tokens: list[str] | tuple[str, ...], rec: Record | None = None) -> ClosedSet:
    if list(tokens) == ["empty"]:
        return ss.EMPTY
    verts, ivs = [], []
    for tok in tokens:
        parts = tok.split(":")
        if parts[0] == "v" and len(parts) == 2:
            verts.append(parts[1])
        elif parts[0] == "i" and len(parts) == 4:
            ivs.append((parts[1], fraction(parts[2], rec), fraction(parts[3], rec)))
        else:
            if rec is None:
                raise InputError(f"bad set token {tok!r}")
            raise rec.fail(tok, "bad set token")
    try:
        return ss.build(X, verts, ivs)
    except InputError as exc:
        if rec is None:
            raise
        raise rec.fail(tokens[0] if tokens else "", str(exc)) from None


def parse_sets(X: Dendrite, text: str, source: str = "<input>") -> list[ClosedSet]:
    """Lines ``hull <point> ...``, ``arc <p> <q>``, ``set <tokens>`` or ``all``."""
    out = []
    for r in records(text, source):
        if r.keyword == "hull":
            if not r.args:
                raise r.fail("hull", "hull needs at least one point")
            out.append(ss.hull(X, [parse_point(X, t, r) for t in r.args]))
        elif r.keyword == "arc":
            p, q = r.expect(2)
            out.append(ss.arc(X, parse_point(X, p, r), parse_point(X, q, r)).carrier)
        elif r.keyword == "set":
            out.append(parse_set(X, r.args, r))
        elif r.keyword == "all":
            r.expect(0)
            out.append(ss.whole(X))
        else:
            raise r.fail(r.keyword, "unknown keyword in set file")
    return out


# -- measures -----------------------------------------------------------------------


def parse_measure(text: str, X: Dendrite | None = None, source: str = "<input>") -> tuple[Dendrite, TreeMeasure]:
    """``atom <point> <mass>`` and ``density <edge> <mass>`` lines; the file may
    also declare the tree itself."""
    recs = list(records(text, source))
    tree_recs = [r for r in recs if r.keyword in TREE_KEYWORDS]
    if tree_recs:
        X = tree_from_records(tree_recs)
    if X is None:
        raise InputError(f"{source}: measure file needs a tree")
    atoms: dict[Point, Fraction] = {}
    dens: dict[str, Fraction] = {}
    last = None
    for r in recs:
        if r.keyword in TREE_KEYWORDS:
            continue
        last = r
        if r.keyword == "atom":
            p, m = r.expect(2)
            pt = parse_point(X, p, r)
            atoms[pt] = atoms.get(pt, Fraction(0)) + fraction(m, r)
        elif r.keyword == "density":
            e, m = r.expect(2)
            if e not in X.edges:
                raise r.fail(e, "unknown edge")
            dens[e] = dens.get(e, Fraction(0)) + fraction(m, r)
        else:
            raise r.fail(r.keyword, "unknown keyword in measure file")
    try:
        return X, TreeMeasure.make(X, atoms, dens)
    except InputError as exc:
        if last is None:
            raise InputError(f"{source}: {exc}") from None
        raise last.fail(last.keyword, str(exc)) from None


def format_measure(mu: TreeMeasure) -> str:
    lines = [f"atom {p} {fmt(m)}" for p, m in mu.atoms]
    lines += [f"density {e} {fmt(m)}" for e, m in mu.densities]
    return "\n".join(lines) + "\n"


# -- maps -------------------------------------------------------------------------------


def parse_profile(token: str, rec: Record | None = None) -> PLMap:
    """``x:y,x:y,...`` breakpoints of an increasing PL bijection of [0, 1]."""
    pts = []
    for piece in token.split(","):
        xy = piece.split(":")
        if len(xy) != 2:
            if rec is None:
                raise InputError(f"bad breakpoint {piece!r}")
            raise rec.fail(piece, "breakpoint must be x:y")
        pts.append((fraction(xy[0], rec), fraction(xy[1], rec)))
    try:
        return PLMap.make(pts)
    except InputError as exc:
        if rec is None:
            raise
        raise rec.fail(token, str(exc)) from None


def parse_map(X: Dendrite, text: str, source: str = "<input>") -> PLHomeo:
    """``vmap <v> <v'>`` and ``emap <e> <e'> <profile>`` lines.

    Vertices without a ``vmap`` line are fixed; edges without an ``emap`` line
    are mapped linearly.  The profile is the increasing parameter map; it is
    flipped automatically when the vertex map reverses the edge.
    """
    vmap = {v: v for v in X.vertices}
    shapes: dict[str, PLMap] = {}
    targets: dict[str, tuple[str, Record]] = {}
    recs = list(records(text, source))
    for r in recs:
        if r.keyword == "vmap":
            a, b = r.expect(2)
            for v in (a, b):
                if v not in X.vertices:
                    raise r.fail(v, "unknown vertex")
            vmap[a] = b
        elif r.keyword == "emap":
            e, e2, prof = r.expect(3)
            for f in (e, e2):
                if f not in X.edges:
                    raise r.fail(f, "unknown edge")
            shapes[e] = parse_profile(prof, r)
            targets[e] = (e2, r)
        else:
            raise r.fail(r.keyword, "unknown keyword in map file")
    try:
        g = PLHomeo.from_increasing(X, vmap, shapes)
    except InputError as exc:
        last = recs[-1] if recs else Record(1, "", (), source)
        raise last.fail(last.keyword, str(exc)) from None
    for e, (e2, r) in targets.items():
        if g.eimage[e] != e2:
            raise r.fail(e2, f"vertex map sends {e} to {g.eimage[e]}")
    return g


def format_map(g: PLHomeo) -> str:
    lines = [f"vmap {v} {w}" for v, w in sorted(g.vmap.items())]
    for e in sorted(g.X.edges):
        phi = g.emaps[e]
        prof = phi if phi.increasing else PLMap.flip().compose(phi)
        if not prof.is_linear:
            lines.append(f"emap {e} {g.eimage[e]} {prof}")
    return "\n".join(lines) + "\n"


# -- cocycle values -------------------------------------------------------------------------


def parse_cocycle(X: Dendrite, text: str) -> CocycleValue:
    """Lines ``entry <point> <germ> <germ> <value>`` (tab or space separated)."""
    d = {}
    for r in records(text):
        if r.keyword != "entry":
            continue
        p, g1, g2, v = r.expect(4)
        d[(parse_point(X, p, r), parse_germ(g1), parse_germ(g2))] = fraction(v, r)
    return CocycleValue.from_dict(d)


# -- actions ------------------------------------------------------------------------------


def parse_action(text: str, base: Path | None = None, tree: Dendrite | None = None, source: str = "<input>"):
    """``backend pl|symbolic``, ``rank <m>``, ``tree <file>`` and
    ``gen <name> <word-or-mapfile>`` lines.  Map and tree files are resolved
    relative to ``base``."""
    from .actions import PLAction, SymbolicAction

    base = base or Path(".")
    backend = None
    rank = None
    gens: list[tuple[str, str, Record]] = []
    for r in records(text, source):
        if r.keyword == "backend":
            (backend,) = r.expect(1)
            if backend not in ("pl", "symbolic"):
                raise r.fail(backend, "backend must be pl or symbolic")
        elif r.keyword == "rank":
            (m,) = r.expect(1)
            if not m.isdigit() or int(m) < 1:
                raise r.fail(m, "rank must be a positive integer")
            rank = int(m)
        elif r.keyword == "tree":
            (path,) = r.expect(1)
            p = base / path
            try:
                tree = parse_tree(p.read_text(), str(p))
            except OSError:
                raise r.fail(path, "cannot read tree file") from None
        elif r.keyword == "gen":
            name, value = r.expect(2)
            gens.append((name, value, r))
        else:
            raise r.fail(r.keyword, "unknown keyword in action file")
    if backend is None:
        raise InputError(f"{source}: action file needs a backend line")
    if backend == "symbolic":
        if rank is None:
            raise InputError(f"{source}: symbolic backend needs a rank line")
        T = sy.FreeTree(rank)
        if not gens:
            return SymbolicAction.free(rank)
        words = []
        for name, value, r in gens:
            w = "" if value == "1" else value
            try:
                words.append((name, T.check_word(w)))
            except InputError as exc:
                raise r.fail(value, str(exc)) from None
        return SymbolicAction(T, words)
    if tree is None:
        raise InputError(f"{source}: pl backend needs a tree (tree line or --tree)")
    homeos = []
    for name, value, r in gens:
        p = base / value
        try:
            homeos.append((name, parse_map(tree, p.read_text(), str(p))))
        except OSError:
            raise r.fail(value, "cannot read map file") from None
    return PLAction(tree, homeos)


def parse_symbolic_measure(T: sy.FreeTree, text: str, source: str = "<input>") -> sy.SymbolicMeasure:
    """``atom <word> <mass>`` and ``boundary <mass>`` lines (``1`` is the empty word)."""
    atoms: dict[str, Fraction] = {}
    boundary = Fraction(0)
    last = None
    for r in records(text, source):
        last = r
        if r.keyword == "atom":
            w, m = r.expect(2)
            w = "" if w == "1" else w
            try:
                T.check_word(w)
            except InputError as exc:
                raise r.fail(w, str(exc)) from None
            atoms[w] = atoms.get(w, Fraction(0)) + fraction(m, r)
        elif r.keyword == "boundary":
            (m,) = r.expect(1)
            boundary += fraction(m, r)
        else:
            raise r.fail(r.keyword, "unknown keyword in symbolic measure file")
    try:
        return sy.SymbolicMeasure.make(T, atoms, boundary)
    except InputError as exc:
        if last is None:
            raise InputError(f"{source}: {exc}") from None
        raise last.fail(last.keyword, str(exc)) from None


def _parse_piece(T: sy.FreeTree, token: str) -> sy.Piece:
    gate, _, rest = token.partition("[")
    if not rest.endswith("]"):
        raise InputError(f"bad piece {token!r}")
    return sy.Piece(sy.parse_spoint(T, gate), frozenset(rest[:-1]))


def parse_symbolic_set(T: sy.FreeTree, tokens: list[str]) -> sy.Convex:
    """``all``, ``cylinder <word>``, ``point <point>``, ``cone <point> <dir>``,
    or the printed form: pieces ``<point>[<dirs>]`` joined by ``&``."""
    if not tokens:
        raise InputError("empty set description")
    if "[" in tokens[0]:
        if tokens[1::2] != ["&"] * (len(tokens) // 2) or len(tokens) % 2 == 0:
            raise InputError(f"bad symbolic set description {' '.join(tokens)!r}")
        return sy.convex(T, [_parse_piece(T, t) for t in tokens[::2]])
    kw, args = tokens[0], tokens[1:]
    if kw == "all" and not args:
        return sy.WHOLE
    if kw == "cylinder" and len(args) == 1:
        return sy.cylinder(T, "" if args[0] == "1" else args[0])
    if kw == "point" and len(args) == 1:
        return sy.singleton(T, sy.parse_spoint(T, args[0]))
    if kw == "cone" and len(args) == 2:
        return sy.cone(T, sy.parse_spoint(T, args[0]), args[1])
    raise InputError(f"bad symbolic set description {' '.join(tokens)!r}")

