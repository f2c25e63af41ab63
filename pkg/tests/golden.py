"""Golden CLI runs.  Paths are relative to the tests directory.

``python tests/golden.py`` rewrites the golden files; review the diff before
committing it.
"""

from __future__ import annotations

import io
import os
from pathlib import Path

HERE = Path(__file__).parent

GOLDEN_CASES: dict[str, list[str]] = {
    "helly": ["helly", "--tree", "data/tripod.txt", "--sets", "data/tripod_sets.txt"],
    "helly_h": ["helly", "--tree", "data/h_tree.txt", "--sets", "data/h_sets.txt"],
    "hull": ["hull", "--tree", "data/h_tree.txt", "--points", "v:a1", "e:eb2:1/2", "v:b1"],
    "median": ["median", "--tree", "data/tripod.txt", "--points", "v:l1", "v:l2", "e:e3:1/3"],
    "jordan_center": ["jordan-center", "--tree", "data/h_tree.txt", "--points", "v:a1", "v:a2", "v:b1", "v:b2"],
    "measure_median_atom": ["measure-median", "--tree", "data/tripod.txt", "--measure", "data/dirac.txt"],
    "measure_median_heavy": ["measure-median", "--tree", "data/tripod.txt", "--measure", "data/tripod_uniform.txt"],
    "measure_median_half": ["measure-median", "--tree", "data/path3.txt", "--measure", "data/path_ends.txt"],
    "cocycle": ["cocycle", "--tree", "data/tripod.txt", "--p", "l1", "--q", "l2", "--r", "l3", "--lp", "2"],
    "cocycle_collinear": ["cocycle", "--tree", "data/h_tree.txt", "--p", "a1", "--q", "r2", "--r", "b1"],
    "fix_rotation": ["fix", "--tree", "data/tripod.txt", "--map", "data/rotation.txt"],
    "fix_squeeze": ["fix", "--tree", "data/tripod.txt", "--map", "data/edge_squeeze.txt"],
    "tectonic": ["tectonic", "--tree", "data/h_tree.txt", "--map", "data/rung_push.txt"],
    "wazewski": ["wazewski", "--n", "3", "--k", "2", "--emit-tree"],
    "wazewski_inf": ["wazewski", "--n", "inf", "--cap", "5", "--k", "1"],
    "tuple_orbits": ["tuple-orbits", "--n", "4", "--k", "3", "--p", "4", "--codes"],
    "tuple_orbits_sample": ["tuple-orbits", "--n", "3", "--k", "2", "--p", "3", "--mode", "sample", "--seed", "4"],
    "tree_correspondence": ["tree-correspondence", "--tree", "data/h_tree.txt"],
    "pingpong": ["pingpong", "--action", "data/free2.txt"],
    "pingpong_pl": ["pingpong", "--action", "data/tripod_rotation_action.txt"],
    "proximality": ["proximality", "--action", "data/free2.txt", "--steps", "4"],
    "proximality_atoms": ["--approx", "proximality", "--action", "data/free2.txt", "--measure", "data/symbolic_atoms.txt", "--steps", "3"],
    "move_off": ["move-off", "--action", "data/free2.txt", "--set", "cylinder", "x"],
    "move_off_pl": ["move-off", "--action", "data/tripod_rotation_action.txt", "--set", "hull", "v:l1", "e:e1:1/2"],
    "elementarity": ["elementarity", "--action", "data/tripod_rotation_action.txt"],
    "elementarity_free": ["elementarity", "--action", "data/free2.txt", "--depth", "3"],
}


def golden_path(name: str) -> Path:
    return HERE / "golden" / f"{name}.out"


def regenerate() -> None:
    from dendrite.cli import run

    os.chdir(HERE)
    (HERE / "golden").mkdir(exist_ok=True)
    for name, argv in GOLDEN_CASES.items():
        out, err = io.StringIO(), io.StringIO()
        code = run(argv, out, err)
        if code:
            raise SystemExit(f"{name}: exit {code}: {err.getvalue()}")
        golden_path(name).write_text(out.getvalue())


if __name__ == "__main__":
    regenerate()
