"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 failure while loading, solving or benchmarking.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..exceptions import MrfError
from .formats import load_model
from .records import RunRecord, record_filename, write_run_record

SOLVER_CHOICES = ("bcd", "pgd", "fw", "admm", "cqp")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mrfrelax", description="MAP inference by continuous relaxation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="run one solver and write a run record")
    p.add_argument("--model", required=True, help="model file (.uai or native)")
    p.add_argument("--solver", required=True, choices=SOLVER_CHOICES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inits", type=int, default=None, help="number of starts (first is the unary start)")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--out", default=None, help="run record path (default: <model>__<solver>__seed<N>.json)")

    p = sub.add_parser("oracle", help="exhaustive MAP for small models")
    p.add_argument("--model", required=True)

    p = sub.add_parser("bench", help="run a suite, or the acceptance criteria with 'run-acceptance'")
    p.add_argument("action", nargs="?", choices=("run-acceptance",))
    p.add_argument("--suite", help="JSON suite spec, or 'desk' for the built-in 50-grid suite")
    p.add_argument("--out", help="output directory")

    p = sub.add_parser("check", help="validate a model file")
    p.add_argument("--model", required=True)
    return parser


def _solve(args, out) -> int:
    from ..solvers import SolverConfig, solve

    model = load_model(args.model)
    overrides = {"seed": args.seed}
    if args.max_iters is not None:
        overrides["max_iters"] = args.max_iters
    cfg = SolverConfig(**overrides)
    inits = args.inits if args.inits is not None else 1
    report = solve(model, args.solver, cfg, inits=inits)
    model_id = Path(args.model).stem
    path = Path(args.out) if args.out else Path(record_filename(model_id, args.solver, args.seed))
    write_run_record(RunRecord(model_id, args.solver, cfg, report), path)
    print(f"{report.discrete_energy:.17g}", file=out)
    return 0


def _oracle(args, out) -> int:
    from ..oracle import brute_force_map

    labels, energy = brute_force_map(load_model(args.model))
    print(f"{energy:.17g}", file=out)
    print(" ".join(map(str, labels)), file=out)
    return 0


def _bench(args, out, err) -> int:
    if args.action == "run-acceptance":
        from ..acceptance import run_all

        results = run_all(lambda line: print(line, file=out, flush=True))
        return 0 if all(r.passed for r in results) else 2
    if not args.suite or not args.out:
        raise _UsageError("mrfrelax bench: --suite and --out are required unless running 'run-acceptance'\n")
    from ..bench import format_summary, run_suite

    rows = run_suite(args.suite, args.out)
    out.write(format_summary(rows))
    failed = sum(r["error"] is not None for r in rows)
    if failed:
        print(f"{failed} run(s) failed; see summary.json", file=err)
    return 0


def _check(args, out) -> int:
    model = load_model(args.model)
    print(f"ok: {model.num_nodes} nodes, {len(model.cliques)} cliques, degree {model.degree}", file=out)
    return 0


def cli_main(argv=None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _solve(args, out)
        if args.command == "oracle":
            return _oracle(args, out)
        if args.command == "bench":
            return _bench(args, out, err)
        return _check(args, out)
    except _UsageError as exc:
        err.write(str(exc))
        return 1
    except (MrfError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(cli_main())
