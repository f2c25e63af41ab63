"""Command-line front end.

Every subcommand writes a report: ``#`` header lines (command echo and a
SHA-256 digest of each input file), tab-separated result records, and a
``# summary`` line.  Input errors exit with status 2; mathematical failures
are reported as records and exit 0.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import actions as ac
from . import cocycle as cc
from . import dynamics as dy
from . import measures as ms
from . import subsets as ss
from . import symbolic as sy
from . import textio as tio
from . import universal as uv
from .tree import InputError


class Report:
    def __init__(self, argv: Sequence[str], approx: bool = False):
        self.header = ["# dendrite " + " ".join(argv)]
        self.lines: list[str] = []
        self.summary = ""
        self.approx = approx

    def input(self, path: str, data: str) -> None:
        digest = hashlib.sha256(data.encode()).hexdigest()
        self.header.append(f"# input\t{path}\tsha256:{digest}")

    def add(self, *fields) -> None:
        self.lines.append("\t".join(str(f) for f in fields))

    def num(self, x) -> str:
        """A rational as ``num/den``, plus a decimal column under ``--approx``."""
        x = Fraction(x)
        out = tio.fmt(x)
        return f"{out}\t{float(x):.12g}" if self.approx else out

    def text(self) -> str:
        body = self.header + self.lines + [f"# summary: {self.summary}"]
        return "\n".join(body) + "\n"


def _read(report: Report, path: str | None, what: str) -> str:
    if path is None:
        raise InputError(f"--{what} is required")
    try:
        data = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    report.input(path, data)
    return data


def _tree(report, args):
    return tio.parse_tree(_read(report, args.tree, "tree"), args.tree)


def _points(X, tokens):
    return [tio.parse_point(X, t) for t in tokens]


def _action(report, args):
    data = _read(report, args.action, "action")
    tree = _tree(report, args) if args.tree else None
    return tio.parse_action(data, Path(args.action).parent, tree, args.action)


# -- tree-core -------------------------------------------------------------------


def cmd_helly(report, args):
    X = _tree(report, args)
    family = tio.parse_sets(X, _read(report, args.sets, "sets"), args.sets)
    if not family:
        raise InputError("set file is empty")
    pairwise = all(
        not ss.intersection(X, A, B).is_empty for i, A in enumerate(family) for B in family[i + 1 :]
    )
    result = ss.helly_intersection(X, family)
    report.add("members", len(family))
    report.add("pairwise", "yes" if pairwise else "no")
    report.add("intersection", "empty" if result is None else tio.format_set(result))
    report.summary = (
        f"{len(family)} sets, intersection {'empty' if result is None else 'nonempty'}"
    )


def cmd_hull(report, args):
    X = _tree(report, args)
    H = ss.hull(X, _points(X, args.points))
    report.add("hull", tio.format_set(H))
    report.summary = f"hull of {len(args.points)} points"


def cmd_median(report, args):
    X = _tree(report, args)
    if len(args.points) != 3:
        raise InputError("median needs exactly three points")
    m = ss.median(X, *_points(X, args.points))
    report.add("median", m)
    report.summary = f"median {m}"


def cmd_jordan_center(report, args):
    X = _tree(report, args)
    centers = ms.jordan_center(X, _points(X, args.points))
    for c in centers:
        report.add("center", c)
    report.summary = f"{len(centers)} center point(s)"


# -- measures ------------------------------------------------------------------------


def cmd_measure_median(report, args):
    X = _tree(report, args) if args.tree else None
    X, mu = tio.parse_measure(_read(report, args.measure, "measure"), X, args.measure)
    branch = ms.median_branch(X, mu)
    pts = ms.measure_median(X, mu)
    report.add("branch", branch)
    for p in pts:
        report.add("median", p)
    report.summary = f"{branch} case, {len(pts)} point(s)"


# -- cocycle ---------------------------------------------------------------------------


def cmd_cocycle(report, args):
    X = _tree(report, args)
    p, q, r = (tio.parse_point(X, t if ":" in t else f"v:{t}") for t in (args.p, args.q, args.r))
    w = cc.omega(X, p, q, r)
    for line in cc.format_value(w):
        report.add(line)
    report.add("support", w.support_size())
    report.add("l1", report.num(cc.lp_norm(w, 1)))
    report.add("linf", report.num(cc.lp_norm(w, "inf")))
    if args.lp is not None:
        exponent = Fraction(args.lp)
        report.add("lp-power-sum", tio.fmt(exponent), report.num(cc.lp_power_sum(w, exponent)))
    report.add("median", ss.median(X, p, q, r))
    report.add("nonvanishing", "yes" if cc.nonvanishing_check(X, p, q, r) else "no")
    report.summary = f"omega has {w.support_size()} nonzero direction pairs"


# -- dynamics ------------------------------------------------------------------------------


def _map(report, args):
    X = _tree(report, args)
    return tio.parse_map(X, _read(report, args.map, "map"), args.map)


def cmd_fix(report, args):
    g = _map(report, args)
    F = dy.fixed_set(g)
    verdict = dy.fix_dichotomy(g)
    arcs = dy.austro_boreal_arcs(g)
    report.add("fixed", tio.format_set(F))
    report.add("dichotomy", verdict)
    for I in arcs:
        report.add("austro-boreal", *I.endpoints)
    report.summary = f"{verdict}, {len(arcs)} austro-boreal arc(s)"


def cmd_tectonic(report, args):
    g = _map(report, args)
    T = dy.tectonic(g)
    for P in T.austro_boreal:
        x, y = P.arc.endpoints
        report.add("piece", x, y, tio.format_set(P.closure))
        w = P.witness
        report.add("witness", x, y, w.z, w.gz, "+" if w.direction > 0 else "-")
    for K, F in T.kernel_components:
        report.add("kernel", tio.format_set(K))
        report.add("kernel-fixed", tio.format_set(F))
    report.summary = f"{len(T.austro_boreal)} open piece(s), {len(T.kernel_components)} kernel component(s)"


# -- universal --------------------------------------------------------------------------------


def _order(args):
    if args.n == "inf":
        if args.cap is None:
            raise InputError("--n inf needs --cap")
        return None
    try:
        return int(args.n)
    except ValueError:
        raise InputError(f"bad order {args.n!r}") from None


def cmd_wazewski(report, args):
    W = uv.generate(_order(args), args.k, args.cap)
    report.add("wazewski", W.order_label, W.k, "branch", len(W.tree.branch_vertices()), "leaves", len(W.leaves()))
    if args.emit_tree:
        for line in tio.format_tree(W.tree).splitlines():
            report.add(line)
    if args.k >= 1:
        report.add("self-similar", "yes" if uv.self_similar(W) else "no")
    report.summary = f"D_{W.order_label} truncated at depth {W.k}"


def cmd_tuple_orbits(report, args):
    n = _order(args)
    if n is None:
        n = args.cap
    res = uv.orbit_count(n, args.k, args.p, mode=args.mode, max_tuples=args.max_tuples, seed=args.seed)
    report.add("orbits", n, args.k, args.p, res.count)
    if args.codes:
        for code, t in res.representatives.items():
            report.add("code", n, args.k, args.p, ",".join(t), code)
    report.add("complete", "yes" if res.complete else "no")
    report.summary = f"{res.count} orbit class(es) of {args.p}-tuples ({res.examined} examined)"


def cmd_tree_correspondence(report, args):
    X = _tree(report, args)
    T = uv.tree_correspondence(X)
    for v in T.vertices:
        report.add("tvertex", v)
    for a, b, length in T.edges:
        report.add("tedge", a, b, tio.fmt(length))
    R = uv.realize(T)
    same = uv.tree_correspondence(R) == T
    report.add("roundtrip", "ok" if same else "mismatch")
    report.summary = f"{len(T.vertices)} vertices, {len(T.edges)} edges"


# -- actions -------------------------------------------------------------------------------------


def cmd_pingpong(report, args):
    act = _action(report, args)
    cert = ac.find_free_pair(act, args.depth)
    if isinstance(cert, ac.Failure):
        report.add("failure", cert)
        report.summary = "no free pair certified"
        return
    report.add("a", act.format_word(cert.a_word))
    report.add("b", act.format_word(cert.b_word))
    for name, S in cert.sets().items():
        report.add("set", name, act.set_str(S))
    report.add("verified", "yes" if ac.verify_pingpong(act, cert) else "no")
    checked, bad = ac.pair_relations(act, cert, 6)
    report.add("relations", checked, len(bad))
    report.summary = "free pair certified"


def cmd_proximality(report, args):
    act = _action(report, args)
    if not isinstance(act, ac.SymbolicAction):
        raise InputError("proximality needs a symbolic action")
    T = act.T
    if args.measure:
        mu = tio.parse_symbolic_measure(T, _read(report, args.measure, "measure"), args.measure)
    else:
        mu = sy.SymbolicMeasure.make(T, boundary=1)
    target = sy.parse_spoint(T, args.target) if args.target else T.ray(T.alphabet[0])
    if not isinstance(target, sy.SEnd):
        raise InputError("the target must be an end")
    res = ac.proximality_push(act, mu, target, args.steps, args.depth)
    for s in res.steps:
        report.add("step", s.n, act.format_word(s.word), s.x_n, report.num(s.mass))
    if res.failure:
        report.add("failure", res.failure)
    best = max((s.mass for s in res.steps), default=Fraction(0))
    report.summary = f"{len(res.steps)} step(s), largest pushed mass {tio.fmt(best)}"


def cmd_move_off(report, args):
    act = _action(report, args)
    if isinstance(act, ac.SymbolicAction):
        Y = tio.parse_symbolic_set(act.T, args.set)
    else:
        sets = tio.parse_sets(act.X, " ".join(args.set))
        if len(sets) != 1:
            raise InputError("--set must describe exactly one set")
        Y = sets[0]
    res = ac.move_off(act, Y, args.depth)
    if isinstance(res, ac.Failure):
        report.add("failure", res)
        report.summary = "no element moves the set off itself"
        return
    report.add("move-off", act.format_word(res.word))
    report.add("image", act.set_str(act.image(res.element, Y)))
    report.summary = f"moved off by {act.format_word(res.word)}"


def cmd_elementarity(report, args):
    act = _action(report, args)
    v = ac.elementarity_certificate(act, args.depth)
    report.add("verdict", v.kind, *v.points)
    report.summary = v.kind


# -- parser --------------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dendrite", description=__doc__.splitlines()[0])
    parser.add_argument("--approx", action="store_true", help="add decimal columns next to rationals")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, fn: Callable, help: str, tree=False, action=False):
        p = sub.add_parser(name, help=help)
        p.set_defaults(fn=fn)
        p.add_argument("--approx", action="store_true", default=argparse.SUPPRESS)
        if tree:
            p.add_argument("--tree", help="tree file")
        if action:
            p.add_argument("--action", required=True, help="action file")
            p.add_argument("--depth", type=int, default=4, help="word search depth L")
        return p

    p = command("helly", cmd_helly, "intersect a family of sub-dendrites", tree=True)
    p.add_argument("--sets", required=True)
    for name, fn in (("hull", cmd_hull), ("median", cmd_median), ("jordan-center", cmd_jordan_center)):
        p = command(name, fn, f"{name} of points", tree=True)
        p.add_argument("--points", nargs="+", required=True)
    p = command("measure-median", cmd_measure_median, "median set of a probability measure", tree=True)
    p.add_argument("--measure", required=True)
    p = command("cocycle", cmd_cocycle, "evaluate omega on a triple", tree=True)
    for flag in ("--p", "--q", "--r"):
        p.add_argument(flag, required=True, help="point (bare names are vertices)")
    p.add_argument("--lp", help="also report the exact l^p power sum")
    for name, fn in (("fix", cmd_fix), ("tectonic", cmd_tectonic)):
        p = command(name, fn, f"{name} of a PL homeomorphism", tree=True)
        p.add_argument("--map", required=True)
    for name, fn in (("wazewski", cmd_wazewski), ("tuple-orbits", cmd_tuple_orbits)):
        p = command(name, fn, "truncated universal dendrites")
        p.add_argument("--n", required=True, help="branch order, or inf")
        p.add_argument("--k", type=int, required=True, help="depth")
        p.add_argument("--cap", type=int, help="branch order standing in for inf")
        if name == "wazewski":
            p.add_argument("--emit-tree", action="store_true")
        else:
            p.add_argument("--p", type=int, required=True, help="tuple size")
            p.add_argument("--mode", choices=("exhaustive", "literal", "sample"), default="exhaustive")
            p.add_argument("--max-tuples", type=int)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--codes", action="store_true", help="list one representative per class")
    command("tree-correspondence", cmd_tree_correspondence, "branch/leaf tree of a dendrite", tree=True)
    command("pingpong", cmd_pingpong, "certify a free pair", tree=True, action=True)
    p = command("proximality", cmd_proximality, "push a measure toward an end", tree=True, action=True)
    p.add_argument("--measure")
    p.add_argument("--target", help="end such as end:1:x")
    p.add_argument("--steps", type=int, default=8)
    p = command("move-off", cmd_move_off, "move a set off itself", tree=True, action=True)
    p.add_argument("--set", nargs="+", required=True)
    command("elementarity", cmd_elementarity, "fixed point / pair / finite orbit certificate", tree=True, action=True)
    return parser


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(list(argv))
    report = Report(argv, approx=getattr(args, "approx", False))
    try:
        args.fn(report, args)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 2
    out.write(report.text())
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
