"""Command-line front end.

    qball graph  --n N
    qball paths  --n N [--cutoff C]
    qball verify --n N [--q Q ...] [--cutoff C] [--tol T] [--seed S] [--suite NAME ...]
    qball reduce --n N WORD

Exit status: 0 when everything passed, 1 when a check failed, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .graphs import SHORT_LABELS, GraphError, ball_graph, vertex_id
from .representation import TruncatedPathSpace, basis_manifest
from .verify import SUITES, RunConfig, run_verification
from .words import ParseError, parse_expr, render

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qball", description="Quantum 2n-ball graph algebras: build, enumerate, verify.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--n", type=int, required=True, help="ball half-dimension (graph E_n)")
        sp.add_argument("--out", default="-", help="output file (default: stdout)")

    g = sub.add_parser("graph", help="print the graph E_n as JSON")
    common(g)

    pa = sub.add_parser("paths", help="list the truncated path basis ending at v0")
    common(pa)
    pa.add_argument("--cutoff", type=int, default=6, help="largest loop exponent (default 6)")

    v = sub.add_parser("verify", help="run the relation checks and print a JSON report")
    common(v)
    v.add_argument("--q", type=float, action="append", help="deformation parameter in (0,1); repeatable (default 0.5)")
    v.add_argument("--cutoff", type=int, default=6, help="largest loop exponent (default 6)")
    v.add_argument("--tol", type=float, default=1e-12, help="residual tolerance (default 1e-12)")
    v.add_argument("--seed", type=int, default=0, help="seed for angles and random words (default 0)")
    v.add_argument("--suite", action="append", choices=SUITES, help="restrict to a suite; repeatable")
    v.add_argument("--format", choices=("json", "ndjson"), default="json")

    r = sub.add_parser("reduce", help="normal form of a word such as 'S[e]* S[e]'")
    common(r)
    r.add_argument("word", help="expression in the S[..], S[..]*, P[..] grammar")
    return p


def _labels(n: int) -> dict[str, str]:
    return SHORT_LABELS.get(n, {})


def _graph(n: int):
    if n < 1:
        raise UsageError(f"--n must be >= 1, got {n}")
    return ball_graph(n)


def cmd_graph(args) -> tuple[str, int]:
    return _graph(args.n).to_json() + "\n", EXIT_OK


def cmd_paths(args) -> tuple[str, int]:
    g = _graph(args.n)
    if args.cutoff < 0:
        raise UsageError("--cutoff must be >= 0")
    space = TruncatedPathSpace(g, vertex_id(0), args.cutoff)
    return basis_manifest(space.basis, _labels(args.n)), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    _graph(args.n)
    try:
        config = RunConfig(
            n=args.n,
            qs=tuple(args.q or (0.5,)),
            cutoff=args.cutoff,
            tol=args.tol,
            seed=args.seed,
            suites=tuple(args.suite or ()),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_verification(config)
    text = report.to_ndjson() if args.format == "ndjson" else report.to_json()
    failed = report.failures()
    print(f"{len(report.checks)} checks, {len(failed)} failed", file=sys.stderr)
    for r in failed[:20]:
        print(f"  FAIL {r.id} {dict(r.context)} residual={r.residual:.3e}", file=sys.stderr)
    return text, EXIT_OK if not failed else EXIT_FAIL


def cmd_reduce(args) -> tuple[str, int]:
    g = _graph(args.n)
    labels = _labels(args.n)
    expr = parse_expr(g, args.word, labels)
    return render(expr, labels) + "\n", EXIT_OK


_COMMANDS = {"graph": cmd_graph, "paths": cmd_paths, "verify": cmd_verify, "reduce": cmd_reduce}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        text, code = _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"qball {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, GraphError) as exc:
        print(f"qball {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
