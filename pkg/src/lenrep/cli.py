"""Command line entry point: ``lenrep check|suite|hom|ext1|ar|decompose``."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .admissible import AlgebraPresentation, mild_classification_probe
from .artheory import ar_sequence_ending_at, knit_ar_quiver, verify_almost_split
from .formats import SpecError, ar_quiver_dot, dumps, load_algebra, load_module, module_to_dict
from .grothendieck import check_generation, lattice_from_ar_quiver
from .homology import ProjectiveError, StabilityError, ext1_basis, hom_basis
from .krullschmidt import decompose, is_indecomposable
from .repcat import RepError, check_rep, height_and_length
from .uniserial import (
    classify_components,
    ext_quiver,
    gabriel_uniserial_check,
    heights_uniserial_check,
    recognize_cycle,
    serre_duality_check,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
SUITE_COMMANDS = ("knit", "k0", "uniserial", "serre", "mild")


def _emit(obj, args) -> None:
    # json puts every item on its own line for indent=0, so treat <= 0 as compact
    sys.stdout.write(dumps(obj, args.json_indent if args.json_indent > 0 else None))


def _err(msg: str) -> None:
    sys.stderr.write(f"lenrep: {msg}\n")


def _algebra(args):
    return load_algebra(args.algebra, args.level_override)


def _morphism_dict(f) -> dict:
    return {v: f.blocks[v].tolist() for v in sorted(f.blocks)}


def cmd_check(args) -> int:
    a = _algebra(args)
    m = load_module(args.module, a)
    rep = check_rep(m)
    out = rep.to_dict()
    out["dim_vector"] = list(m.dim_vector)
    _emit(out, args)
    return EXIT_OK if rep.valid else EXIT_FAILED


def cmd_hom(args) -> int:
    a = _algebra(args)
    m, n = load_module(args.source, a), load_module(args.target, a)
    H = hom_basis(m, n)
    _emit({"dim": H.dim, "basis": [_morphism_dict(f) for f in H.basis]}, args)
    return EXIT_OK


def cmd_ext1(args) -> int:
    a = _algebra(args)
    m, n = load_module(args.source, a), load_module(args.target, a)
    e = ext1_basis(m, n, stable=not args.unstable)
    out = {"dim": e.dim, "stable": a.level >= m.total_dim + n.total_dim}
    if args.realize:
        out["extensions"] = []
        for k in range(e.dim):
            coeffs = [1 if j == k else 0 for j in range(e.dim)]
            s = e.realize(coeffs)
            out["extensions"].append({"middle": module_to_dict(s.middle), "dim_vector": list(s.middle.dim_vector)})
    _emit(out, args)
    return EXIT_OK


def _summand_list(m) -> list:
    out = []
    for x, c in decompose(m).pieces:
        out.append({"multiplicity": c, "dim_vector": list(x.dim_vector), "module": module_to_dict(x)})
    return out


def cmd_decompose(args) -> int:
    a = _algebra(args)
    m = load_module(args.module, a)
    _emit({"dim_vector": list(m.dim_vector), "summands": _summand_list(m)}, args)
    return EXIT_OK


def cmd_ar(args) -> int:
    a = _algebra(args)
    z = load_module(args.ending_at, a)
    if not is_indecomposable(z):
        raise RepError("module is not indecomposable")
    s = ar_sequence_ending_at(z, check_indecomposable=False)
    out = {
        "left": module_to_dict(s.left),
        "middle": module_to_dict(s.middle),
        "right": module_to_dict(s.right),
        "middle_summands": [{"multiplicity": d["multiplicity"], "dim_vector": d["dim_vector"]} for d in _summand_list(s.middle)],
        "exact": s.is_exact(),
        "split": s.is_split(),
    }
    code = EXIT_OK
    if args.verify:
        Q = knit_ar_quiver(a, max_length=args.max_length, budget=args.budget)
        rep = verify_almost_split(s, Q.reps)
        out["verification"] = rep.to_dict()
        out["verification"]["complete_test_list"] = Q.complete
        if not rep.passed:
            code = EXIT_FAILED
    _emit(out, args)
    return code


def _knit_section(Q) -> dict:
    verts = []
    for k, v in enumerate(Q.vertices):
        ht, ln = height_and_length(v.rep)
        verts.append(
            {"index": k, "dim_vector": list(v.dim_vector), "projective": v.projective, "injective": v.injective, "height": ht, "length": ln}
        )
    return {
        "vertices": len(Q.vertices),
        "meshes": len(Q.meshes),
        "complete": Q.complete,
        "budget_exceeded": Q.budget_exceeded,
        "frontier": [list(f) for f in Q.frontier],
        "stable_tau_periods": Q.stable_tau_periods(),
        "mesh_consistent": Q.mesh_consistent(),
        "objects": verts,
        "arrows": [{"from": s, "to": t, "multiplicity": m} for (s, t), m in sorted(Q.arrows.items())],
        "tau": [{"from": z, "to": x} for z, x in sorted(Q.tau.items())],
    }


def run_suite(a, commands, max_length=None, budget=10_000, serre_bound=3):
    """Report dict, knitted quiver (or None), and the exit code."""
    report, failed = {"algebra": {"dim": a.dim, "level": a.level, "char": a.p}}, False
    Q = None
    if {"knit", "k0", "uniserial"} & set(commands):
        Q = knit_ar_quiver(a, max_length=max_length, budget=budget)
    if "knit" in commands:
        report["knit"] = _knit_section(Q)
        failed |= not report["knit"]["mesh_consistent"]
    if "k0" in commands:
        if Q.complete:
            lat = lattice_from_ar_quiver(Q)
            verdict, cert = check_generation(lat)
            report["k0"] = {"verdict": verdict, "rank": lat.rank, "certificate": cert.to_dict()}
            failed |= not verdict
        else:
            report["k0"] = {"skipped": "indecomposable list incomplete"}
    if "uniserial" in commands:
        sec = {}
        if a.level >= 2:
            q = ext_quiver(a)
            g, gw = gabriel_uniserial_check(q)
            sec.update({"ext_quiver": q.to_dict(), "gabriel": g, "gabriel_witness": gw, "components": classify_components(q)})
        if Q.complete:
            h, hw = heights_uniserial_check(Q.reps)
            sec.update({"heights": h, "heights_witness": hw})
        if "gabriel" in sec and "heights" in sec:
            sec["agree"] = sec["gabriel"] == sec["heights"]
            failed |= not sec["agree"]
        report["uniserial"] = sec
    if "serre" in commands:
        order = recognize_cycle(a)
        if order is None:
            report["serre"] = {"skipped": "not a relation-free cycle"}
        else:
            lvl = max(a.level, 2 * serre_bound + len(order))
            r = serre_duality_check(a, serre_bound, lvl)
            report["serre"] = {
                "level": r["level"],
                "length_bound": serre_bound,
                "pairs": len(r["pairs"]),
                "all_pass": r["all_pass"],
                "violations": r["violations"],
                "table": [[p["X"], p["Y"], p["ext1"], p["hom_Y_tauX"]] for p in r["pairs"]],
            }
            failed |= not r["all_pass"]
    if "mild" in commands:
        pres = AlgebraPresentation.of(a)
        report["mild"] = mild_classification_probe(pres, max(a.level, 3)).to_dict()
    code = EXIT_FAILED if failed else EXIT_OK
    if Q is not None and not Q.complete:
        code = EXIT_BUDGET
    return report, Q, code


def cmd_suite(args) -> int:
    a = _algebra(args)
    cmds = SUITE_COMMANDS if "all" in args.commands else tuple(c for c in SUITE_COMMANDS if c in args.commands)
    report, Q, code = run_suite(a, cmds, args.max_length, args.budget, args.serre_bound)
    if (args.dot or args.figure) and Q is None:
        Q = knit_ar_quiver(a, max_length=args.max_length, budget=args.budget)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(ar_quiver_dot(Q))
    if args.figure:
        from .plotting import plot_ar_quiver

        plot_ar_quiver(Q, args.figure)
    _emit(report, args)
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lenrep", description="Exact checks on representations of bound quiver algebras over F_p.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level-override", type=int, default=None, help="replace the truncation level of the algebra file")
    common.add_argument("--json-indent", type=int, default=2, help="0 for single-line output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a module against the algebra")
    p.add_argument("algebra")
    p.add_argument("module")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("suite", parents=[common], help="knitting, K0, uniseriality, Serre duality and mildness reports")
    p.add_argument("algebra")
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--commands", nargs="+", choices=SUITE_COMMANDS + ("all",), default=["all"])
    p.add_argument("--serre-bound", type=int, default=3)
    p.add_argument("--dot", default=None, help="write the AR quiver as DOT")
    p.add_argument("--figure", default=None, help="render the AR quiver to an image file")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("hom", parents=[common], help="basis of Hom(M, N)")
    p.add_argument("algebra")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("ext1", parents=[common], help="dimension of Ext^1(M, N)")
    p.add_argument("algebra")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--unstable", action="store_true", help="allow levels below l(M) + l(N)")
    p.add_argument("--realize", action="store_true", help="also output one extension per basis class")
    p.set_defaults(func=cmd_ext1)

    p = sub.add_parser("ar", parents=[common], help="almost split sequence ending at a module")
    p.add_argument("algebra")
    p.add_argument("--ending-at", required=True)
    p.add_argument("--verify", action="store_true", help="verify against the knitted indecomposables")
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--budget", type=int, default=10_000)
    p.set_defaults(func=cmd_ar)

    p = sub.add_parser("decompose", parents=[common], help="indecomposable summands with multiplicities")
    p.add_argument("algebra")
    p.add_argument("module")
    p.set_defaults(func=cmd_decompose)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as e:
        _err(str(e))
        return EXIT_INPUT
    except (RepError, StabilityError, ProjectiveError, ValueError) as e:
        _err(str(e))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
