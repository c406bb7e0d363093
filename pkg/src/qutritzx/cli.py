"""Command-line entry point: ``qutritzx <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import checks
from .checks import CONFIG_ENV, CheckResult, Report, RunConfig
from .diagram import Diagram, DiagramError
from .graphstate import LCSearchError, Multigraph, graph_state_diagram, lc_unitary, local_complement
from .semantics import DiagramTooLarge, interpret, proportional_eq

EXIT_FAIL = 1
EXIT_USAGE = 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    p.add_argument("--arity-bound", type=int, help="largest spider arity instantiated (default 4)")
    p.add_argument("--cap", type=int, help="largest tensor rank during contraction (default 8)")
    p.add_argument("--tol", type=float, help="float tolerance for non-stabilizer phases (default 1e-9)")
    p.add_argument("--trials", type=int, help="random graphs per size in sweeps (default 100)")
    p.add_argument("--seed", type=int, help="seed for every randomised sweep")
    p.add_argument("--exhaustive-n", type=int, help="largest vertex count swept exhaustively (default 3)")
    p.add_argument("--json", action="store_true", help="line-delimited JSON records instead of a table")
    p.add_argument("--timings", action="store_true", help="include seconds in JSON records")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qutritzx", description="Qutrit ZX-calculus rewriting and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check-rules", parents=[common], help="certify every catalog rule")
    sub.add_parser("check-lemmas", parents=[common], help="derived lemmas, rewrite proofs, gadget identities")
    sub.add_parser("verify-lc", parents=[common], help="local complementation and Euler decomposition evidence")
    ev = sub.add_parser("eval", parents=[common], help="print the matrix of a diagram file")
    ev.add_argument("file")
    lc = sub.add_parser("lc", parents=[common], help="local complementation of a graph file")
    lc.add_argument("file")
    lc.add_argument("u", type=int)
    lc.add_argument("lam", type=int, choices=(1, 2), metavar="lambda")
    lc.add_argument("--verify", action="store_true", help="search the local unitary and check it exactly")
    dot = sub.add_parser("export-dot", parents=[common], help="Graphviz source for a diagram or graph file")
    dot.add_argument("file")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig.load(
        args.config,
        arity_bound=args.arity_bound,
        qutrit_cap=args.cap,
        float_tolerance=args.tol,
        random_trials=args.trials,
        rng_seed=args.seed,
        exhaustive_n=args.exhaustive_n,
    )


def _emit(report: Report, args: argparse.Namespace) -> int:
    if args.json:
        for rec in report.records(args.timings):
            print(json.dumps(rec, sort_keys=True))
    else:
        print(report.table())
    return 0 if report.ok else EXIT_FAIL


def _read_diagram(path: str) -> Diagram:
    return Diagram.from_json(Path(path).read_text())


def _cmd_eval(args, cfg: RunConfig) -> int:
    m = interpret(_read_diagram(args.file), cap=cfg.qutrit_cap)
    print(m.dump(), end="")
    return 0


def _cmd_lc(args, cfg: RunConfig) -> int:
    g = Multigraph.parse(Path(args.file).read_text())
    h = local_complement(g, args.u, args.lam)
    report = Report("lc")
    if not args.json:
        print(h.matrix_text(), end="")
    if args.verify:
        try:
            result = lc_unitary(g, args.u, args.lam)
        except LCSearchError as exc:
            report.results.append(CheckResult("lc:search", "local complementation property", False,
                                              detail=str(exc), counterexample={"graph": g.matrix_text()}))
        else:
            lhs = interpret(graph_state_diagram(g).compose(result.diagram()), cap=cfg.qutrit_cap)
            ok = proportional_eq(lhs, interpret(graph_state_diagram(h), cap=cfg.qutrit_cap))
            report.results.append(CheckResult("lc:verify", "local complementation property", ok,
                                              detail=result.describe().replace("\n", "; ")))
            if not args.json:
                print(result.describe())
    if args.json:
        print(json.dumps({"graph": [list(r) for r in h.gamma]}))
        for rec in report.records(args.timings):
            print(json.dumps(rec, sort_keys=True))
    elif args.verify:
        print("verify: " + ("PASS" if report.ok else "FAIL"))
    return 0 if report.ok else EXIT_FAIL


def _cmd_export_dot(args, cfg: RunConfig) -> int:
    text = Path(args.file).read_text()
    try:
        d = Diagram.from_json(text)
    except DiagramError:
        d = graph_state_diagram(Multigraph.parse(text))
    print(d.to_dot(), end="")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "check-rules":
            return _emit(checks.rule_checks(cfg), args)
        if args.command == "check-lemmas":
            return _emit(checks.lemma_checks(cfg), args)
        if args.command == "verify-lc":
            return _emit(checks.lc_checks(cfg), args)
        if args.command == "eval":
            return _cmd_eval(args, cfg)
        if args.command == "lc":
            return _cmd_lc(args, cfg)
        return _cmd_export_dot(args, cfg)
    except DiagramTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DiagramError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
