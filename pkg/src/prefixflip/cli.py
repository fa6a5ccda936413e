"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 verification failed or
instance proven unreachable, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import analysis, formats, solvers
from .engine import BudgetExhausted, SearchBudget, Unreachable
from .model import MultiArray

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}") from None
    if not 1 <= len(dims) <= 3 or any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError(f"dims must be 1 to 3 positive integers, got {text!r}")
    return dims


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"), default="text")

    parser = _Parser(prog="prefixflip", description="Prefix-reversal rearrangement of token arrays.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", parents=[common], help="solve an instance file")
    p.add_argument("file")
    method = p.add_mutually_exclusive_group()
    method.add_argument("--exact", choices=("bfs", "bibfs", "ida"), default=None)
    method.add_argument("--greedy", action="store_true")
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("--max-nodes", type=_positive)
    p.add_argument("--max-time", type=float)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--threads", type=_positive, default=1)

    p = sub.add_parser("verify", parents=[common], help="replay a move sequence")
    p.add_argument("file")
    p.add_argument("--moves", required=True)

    p = sub.add_parser("decide", parents=[common], help="rearrangeability verdict")
    p.add_argument("file", nargs="?")
    p.add_argument("--dims", type=_dims)

    p = sub.add_parser("orbit", parents=[common], help="enumerate the orbit of the standard array")
    p.add_argument("--dims", type=_dims, required=True)
    p.add_argument("--mode", choices=("unsigned", "signed"), required=True)
    p.add_argument("--max-nodes", type=_positive)
    p.add_argument("--threads", type=_positive, default=1)

    p = sub.add_parser("random", parents=[common], help="generate a seeded instance")
    p.add_argument("--dims", type=_dims, required=True)
    p.add_argument("--mode", choices=("unsigned", "signed"), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--policy", default="uniform", help="uniform or walk:K")

    p = sub.add_parser("theorem-check", parents=[common], help="check orbit sizes against the theorem")
    p.add_argument("--max-cells", type=_positive, required=True)
    p.add_argument("--threads", type=_positive, default=1)
    return parser


def _read_instance(path: str) -> MultiArray:
    with open(path, encoding="utf-8") as fh:
        return formats.parse_instance(fh.read())


def _instance_fields(ma: MultiArray) -> dict:
    return {"dims": list(ma.dims), "mode": ma.mode.value}


def _failure(kind: str, status: str, exc: Exception, fmt: str, **fields) -> str:
    if fmt == "machine":
        doc = formats.result_document(kind, status=status, reason=str(exc),
                                      nodes_expanded=getattr(exc, "nodes_expanded", None), **fields)
        return formats.dumps(doc)
    return f"status: {status}\nreason: {exc}\n"


def _solve(args, out) -> int:
    ma = _read_instance(args.file)
    fields = _instance_fields(ma)
    budget = SearchBudget(args.max_depth, args.max_nodes, args.max_time)
    try:
        if args.greedy:
            greedy = solvers.greedy_signed_1d if ma.signed else solvers.greedy_unsigned_1d
            sol = greedy(ma)
        elif args.exact == "bibfs":
            sol = solvers.bidirectional_bfs_solve(ma, budget)
        elif args.exact == "ida":
            sol = solvers.ida_solve(ma, budget)
        else:
            sol = solvers.bfs_solve(ma, budget, threads=args.threads)
    except Unreachable as exc:
        out.write(_failure("solution", "unreachable", exc, args.format, solved=False, **fields))
        return EXIT_FAILED
    except BudgetExhausted as exc:
        out.write(_failure("solution", "budget-exhausted", exc, args.format, solved=False, **fields))
        return EXIT_BUDGET
    check = solvers.verify(ma, sol.moves)
    if not check.solved:
        raise AssertionError(f"solver {sol.method} returned a sequence that does not solve the instance")
    out.write(formats.emit_result(sol, args.format, deterministic=args.deterministic, **fields))
    return EXIT_OK


def _verify(args, out) -> int:
    ma = _read_instance(args.file)
    moves = formats.parse_moves(args.moves)
    result = solvers.verify(ma, moves)
    out.write(formats.emit_result(result, args.format, moves=formats.write_moves(moves),
                                  length=len(moves), **_instance_fields(ma)))
    return EXIT_OK if result.solved else EXIT_FAILED


def _decide(args, out) -> int:
    if (args.file is None) == (args.dims is None):
        raise UsageError("decide: give exactly one of FILE or --dims")
    if args.file is not None:
        ma = _read_instance(args.file)
        result = analysis.decide_instance(ma)
        fields = _instance_fields(ma)
    else:
        result = analysis.decide_dims(args.dims)
        fields = {"dims": list(args.dims), "mode": "unsigned"}
    out.write(formats.emit_result(result, args.format, **fields))
    return EXIT_FAILED if result.verdict is analysis.Verdict.UNREACHABLE_ODD_PARITY else EXIT_OK


def _orbit(args, out) -> int:
    report = analysis.orbit_stats(args.dims, args.mode, SearchBudget(max_nodes=args.max_nodes),
                                  threads=args.threads)
    # orbit output is reproducible by construction; timing is omitted
    out.write(formats.emit_result(report, args.format, deterministic=True))
    return EXIT_OK if report.complete else EXIT_BUDGET


def _random(args, out) -> int:
    ma = analysis.random_instance(args.dims, args.mode, args.seed, args.policy)
    if args.format == "text":
        out.write(formats.write_instance(ma))
    else:
        doc = formats.result_document("instance", status="ok", instance=formats.write_instance(ma),
                                      seed=args.seed, **_instance_fields(ma))
        out.write(formats.dumps(doc))
    return EXIT_OK


def _theorem(args, out) -> int:
    rows = analysis.theorem_experiment(args.max_cells, threads=args.threads)
    out.write(formats.emit_result(rows, args.format))
    return EXIT_OK if all(r.status != "FAIL" for r in rows) else EXIT_FAILED


_COMMANDS = {
    "solve": _solve,
    "verify": _verify,
    "decide": _decide,
    "orbit": _orbit,
    "random": _random,
    "theorem-check": _theorem,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except (formats.FormatError, solvers.ModeError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
