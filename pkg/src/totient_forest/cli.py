"""Command-line front end.

Exit status: 0 success, 1 domain or runtime error, 2 usage error,
3 inconclusive case equation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .arboreal import ConsistencyError, grow_forest, synthesize_case_equation, default_threads
from .bounds import BoundDerivationError, resolve_bound, validate_bound_empirically
from .core import DomainError, euler_phi
from .fibers import BudgetExceeded, totient_fiber, totient_fiber_bruteforce
from .scoreboard import evaluate_trace, scoreboard_sequence
from .sequences import InvalidSequence, SequenceRangeError, parse_sequence
from .stats import (
    canopy_density,
    fruit_rolling_share,
    value_frequencies,
    write_canopy_csv,
    write_frequency_csv,
    write_levels_csv,
    write_profile_csv,
    write_rolling_csv,
)

SCHEMA_VERSION = 1

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    common.add_argument("--output", "-o", default="-", help="output path ('-' for stdout)")

    seq_opt = argparse.ArgumentParser(add_help=False)
    seq_opt.add_argument("--sequence", "-s", required=True,
                         help="naturals|squares|cubes|odds|poly:c0,c1,...|list:a1,a2,...")

    p = argparse.ArgumentParser(prog="totient-forest", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("phi", parents=[common], help="Euler's totient of N")
    sp.add_argument("n", type=_nonneg_int)

    sp = sub.add_parser("fiber", parents=[common], help="all n with phi(n) = M")
    sp.add_argument("m", type=_nonneg_int)
    sp.add_argument("--order", choices=("asc", "desc"), default="desc", help="divisor iteration order")
    sp.add_argument("--oracle", action="store_true", help="cross-check against a brute-force sieve scan")

    sp = sub.add_parser("eval", parents=[common, seq_opt], help="scoreboard value A(N)")
    sp.add_argument("--n", type=_positive_int, required=True)
    sp.add_argument("--trace", action="store_true", help="emit every partial evaluation as n,k,value")

    sp = sub.add_parser("sequence", parents=[common, seq_opt], help="scoreboard sequence A(1..N)")
    sp.add_argument("--n-max", type=_positive_int, required=True)

    sp = sub.add_parser("forest", parents=[common, seq_opt], help="grow the totient forest")
    sp.add_argument("--bound", "-b", default="auto", choices=("auto", "naturals", "squares", "poly-derive", "none"))
    sp.add_argument("--height-cap", type=_positive_int, default=2000)
    sp.add_argument("--node-cap", type=_positive_int, default=10_000_000)
    sp.add_argument("--roots", help="comma-separated roots (required with --bound none)")
    sp.add_argument("--witness-window", type=_positive_int, default=None)
    sp.add_argument("--synthesize", action="store_true", help="print the case equation")
    sp.add_argument("--stats", metavar="DIR", nargs="?", const=".",
                    help="write canopy.csv and profile.csv into DIR")
    sp.add_argument("--levels-csv", metavar="DIR", help="write one height,value CSV per tree into DIR")
    sp.add_argument("--threads", type=_positive_int, default=None)

    sp = sub.add_parser("freq", parents=[common, seq_opt], help="value frequencies or rolling shares")
    sp.add_argument("--n-max", type=_positive_int, required=True)
    sp.add_argument("--window", type=_positive_int, default=None)

    sp = sub.add_parser("validate-bound", parents=[common, seq_opt], help="scan traces for bound violations")
    sp.add_argument("--bound", "-b", default="auto", choices=("auto", "naturals", "squares", "poly-derive", "none"))
    sp.add_argument("--n-max", type=_positive_int, required=True)
    sp.add_argument("--evidence", action="store_true", help="include derivation evidence (json)")
    return p


@contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _dump_json(fh, payload: dict) -> None:
    json.dump({"schema_version": SCHEMA_VERSION, **payload}, fh, indent=2, sort_keys=True)
    fh.write("\n")


def _cmd_phi(args, out) -> int:
    if args.n == 0:
        raise DomainError("phi is undefined at 0")
    value = euler_phi(args.n)
    if args.format == "json":
        _dump_json(out, {"n": args.n, "phi": value})
    else:
        print(value, file=out)
    return EXIT_OK


def _cmd_fiber(args, out) -> int:
    fib = totient_fiber(args.m, args.order)
    if args.oracle:
        ref = totient_fiber_bruteforce(args.m)
        if ref.members != fib.members:
            raise ConsistencyError(f"fiber mismatch for {args.m}: {fib.members} vs oracle {ref.members}")
    if args.format == "json":
        _dump_json(out, {"m": args.m, "members": list(fib.members), "oracle_checked": args.oracle})
    else:
        print(" ".join(map(str, fib.members)), file=out)
    return EXIT_OK


def _cmd_eval(args, out) -> int:
    seq = parse_sequence(args.sequence)
    trace = evaluate_trace(seq, args.n)
    if args.format == "json":
        payload = {"sequence": seq.describe(), "n": args.n, "value": trace.final}
        if args.trace:
            payload["trace"] = list(trace.values)
        _dump_json(out, payload)
    elif args.trace:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for k in range(args.n, -1, -1):
            w.writerow([args.n, k, trace.values[k]])
    else:
        print(trace.final, file=out)
    return EXIT_OK


def _cmd_sequence(args, out) -> int:
    seq = parse_sequence(args.sequence)
    values = scoreboard_sequence(seq, args.n_max)
    if args.format == "json":
        _dump_json(out, {"sequence": seq.describe(), "values": values})
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "value"])
        w.writerows(enumerate(values, 1))
    return EXIT_OK


def _cmd_forest(args, out) -> int:
    seq = parse_sequence(args.sequence)
    bound = resolve_bound(args.bound, seq)
    roots = None
    if args.roots:
        try:
            roots = [int(r) for r in args.roots.split(",") if r.strip()]
        except ValueError:
            raise UsageError(f"bad --roots {args.roots!r}") from None
    elif not bound.bounded:
        raise UsageError("--roots is required when the bound is 'none' or cannot be derived")
    threads = args.threads or default_threads()
    forest = grow_forest(seq, bound, args.height_cap, args.node_cap, roots=roots, threads=threads,
                         witness_window=args.witness_window)

    if args.stats is not None:
        d = Path(args.stats)
        d.mkdir(parents=True, exist_ok=True)
        with open(d / "canopy.csv", "w", newline="") as fh:
            write_canopy_csv(fh, canopy_density(forest))
        with open(d / "profile.csv", "w", newline="") as fh:
            write_profile_csv(fh, forest)
    if args.levels_csv:
        d = Path(args.levels_csv)
        d.mkdir(parents=True, exist_ok=True)
        for t in forest.trees:
            with open(d / f"tree_{t.root}.csv", "w", newline="") as fh:
                write_levels_csv(fh, t)

    status = EXIT_OK
    eq = None
    if args.synthesize:
        eq = synthesize_case_equation(forest, seq)
        if not eq.conclusive:
            status = EXIT_INCONCLUSIVE

    fmt = args.format or ("csv" if args.synthesize else "json")
    if fmt == "json":
        payload = forest.to_json()
        if isinstance(bound.evidence, dict) and bound.evidence:
            payload["bound_evidence"] = bound.evidence
        if eq is not None:
            payload["case_equation"] = eq.to_json()
        _dump_json(out, payload)
    elif eq is not None:
        print(eq, file=out)
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["root", "status", "fruit_heights"])
        for t in forest.trees:
            w.writerow([t.root, str(t.status), " ".join(map(str, t.fruit_heights))])
    return status


def _cmd_freq(args, out) -> int:
    seq = parse_sequence(args.sequence)
    values = scoreboard_sequence(seq, args.n_max)
    if args.window is not None:
        if args.window > args.n_max:
            raise UsageError("--window must not exceed --n-max")
        rows = fruit_rolling_share(seq, args.n_max, args.window, values=values)
        if args.format == "json":
            _dump_json(out, {"sequence": seq.describe(), "window": args.window,
                             "rows": [{"n": n, "value": v, "share": float(s)} for n, v, s in rows]})
        else:
            write_rolling_csv(out, rows)
        return EXIT_OK
    table = value_frequencies(seq, (1, args.n_max), values=values)
    if args.format == "json":
        _dump_json(out, {"sequence": seq.describe(), "n_max": args.n_max,
                         "values": [{"value": v, "count": c, "share": float(s)} for v, c, s in table.rows()]})
    else:
        write_frequency_csv(out, table)
    return EXIT_OK


def _cmd_validate(args, out) -> int:
    seq = parse_sequence(args.sequence)
    bound = resolve_bound(args.bound, seq)
    violations = validate_bound_empirically(seq, bound, args.n_max)
    if args.format == "json":
        payload = {"sequence": seq.describe(), "bound": bound.to_json() if args.evidence else bound.describe(),
                   "n_max": args.n_max, "violations": [list(v) for v in violations]}
        _dump_json(out, payload)
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "k", "value", "bound"])
        w.writerows(violations)
    return EXIT_DOMAIN if violations else EXIT_OK


COMMANDS = {
    "phi": _cmd_phi,
    "fiber": _cmd_fiber,
    "eval": _cmd_eval,
    "sequence": _cmd_sequence,
    "forest": _cmd_forest,
    "freq": _cmd_freq,
    "validate-bound": _cmd_validate,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with _open_out(args.output) as out:
            return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InvalidSequence, SequenceRangeError, OverflowError, BoundDerivationError,
            BudgetExceeded, ConsistencyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())
