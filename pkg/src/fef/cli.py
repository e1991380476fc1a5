"""
Command line interface.

    fef bounds   --family alpha3x3 --param alpha=4 --format json
    fef sweep    --family horodecki3x3 --vary a --from 0 --to 1 --steps 201 \\
                 --columns thm1,correlation --out fig1.csv
    fef estimate --family max-mixed --d 2 --seed 7
    fef fidelity 2/7 --d 3

Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
1 on usage errors and 2 when a state cannot be built or validated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bounds, estimator
from .errors import FEFError, ParseError, ValidationError
from .states import FAMILIES, DensityMatrix, load_state, make_state

SWEEP_COLUMNS = ("thm1", "correlation", "spectral", "reduced", "single_fraction", "estimate")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _number(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _kv(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    return key.strip(), _number(value)


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".17g")


def _add_state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=sorted(FAMILIES), help="named state family")
    p.add_argument("--param", type=_kv, action="append", default=[], metavar="NAME=VALUE",
                   help="family parameter (repeatable)")
    p.add_argument("--file", type=Path, help="JSON state file instead of a family")
    p.add_argument("--d", type=int, help="local dimension for families that need one")


def _resolve_state(args) -> DensityMatrix:
    if (args.family is None) == (args.file is None):
        raise UsageError("give exactly one of --family or --file")
    if args.file is not None:
        if args.param:
            raise UsageError("--param cannot be combined with --file")
        return load_state(args.file)
    return make_state(args.family, dict(args.param), args.d)


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _records_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_bounds(args) -> int:
    rho = _resolve_state(args)
    rep = bounds.report(rho).to_dict()
    if args.format == "json":
        print(json.dumps(rep, indent=2))
    else:
        keys = list(rep)
        vals = [_fmt(v) if isinstance(v, float) else ("" if v is None else str(v)) for v in rep.values()]
        sys.stdout.write(_records_csv(keys, [vals]))
    return 0


def cmd_estimate(args) -> int:
    rho = _resolve_state(args)
    res = estimator.estimate_fef(rho, args.restarts, args.max_iters, args.seed)
    out = res.to_dict(emit_unitary=args.emit_unitary)
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        out.pop("best_unitary", None)
        sys.stdout.write(_records_csv(list(out), [[_fmt(v) if isinstance(v, float) else str(v) for v in out.values()]]))
    return 0


def cmd_fidelity(args) -> int:
    try:
        f = bounds.fidelity_from_fef(args.F, args.d)
    except ValidationError as exc:
        raise UsageError(str(exc)) from None
    print(format(f, ".15g"))
    return 0


def _threads() -> int:
    env = os.environ.get("FEF_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"FEF_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def sweep_rows(family: str, vary: str, grid: np.ndarray, fixed: dict, d: int | None,
               columns: Sequence[str], seed: int = 0, restarts: int = estimator.DEFAULT_RESTARTS,
               max_iters: int = estimator.DEFAULT_MAX_ITERS, threads: int = 1) -> list[list[float]]:
    """Evaluate the requested columns at each grid point; rows come back in grid order."""

    def point(value: float) -> list[float]:
        rho = make_state(family, {**fixed, vary: float(value)}, d)
        row = [float(value)]
        for col in columns:
            if col == "estimate":
                row.append(estimator.estimate_fef(rho, restarts, max_iters, seed).lower_bound)
            elif col == "single_fraction":
                row.append(bounds.single_fraction(rho))
            else:
                row.append(getattr(bounds, f"{col}_bound")(rho))
        return row

    if threads <= 1:
        return [point(v) for v in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(point, grid))


def cmd_sweep(args) -> int:
    fam = FAMILIES.get(args.family)
    if fam is None:
        raise UsageError("--family is required for sweep")
    if args.vary not in fam.params:
        raise UsageError(f"family {fam.name!r} has no parameter {args.vary!r} (has {list(fam.params)})")
    if not args.start < args.stop:
        raise UsageError("--from must be smaller than --to")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    columns = [c.strip() for c in args.columns.split(",") if c.strip()]
    bad = [c for c in columns if c not in SWEEP_COLUMNS]
    if bad or not columns:
        raise UsageError(f"unknown column(s) {bad}; choose from {list(SWEEP_COLUMNS)}")
    fixed = dict(args.param)
    if args.vary in fixed:
        raise UsageError(f"{args.vary!r} is both varied and fixed")

    grid = np.linspace(args.start, args.stop, args.steps)
    rows = sweep_rows(fam.name, args.vary, grid, fixed, args.d, columns, args.seed,
                      args.restarts, args.max_iters, _threads())
    text = _records_csv(["param", *columns], [[_fmt(x) for x in row] for row in rows])
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write_atomic(args.out, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fef", description="Bounds and estimates for the fully entangled fraction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="all upper bounds, single fraction and exactness certificate")
    _add_state_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("estimate", help="variational lower bound")
    _add_state_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=estimator.DEFAULT_RESTARTS)
    p.add_argument("--max-iters", type=int, default=estimator.DEFAULT_MAX_ITERS)
    p.add_argument("--emit-unitary", action="store_true", help="include the best unitary as [re, im] pairs")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="tabulate bounds along one family parameter as CSV")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--param", type=_kv, action="append", default=[], metavar="NAME=VALUE",
                   help="fixed family parameter (repeatable)")
    p.add_argument("--d", type=int)
    p.add_argument("--vary", required=True, help="parameter to sweep")
    p.add_argument("--from", dest="start", type=_number, required=True)
    p.add_argument("--to", dest="stop", type=_number, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--columns", default="thm1,correlation,spectral,reduced,single_fraction")
    p.add_argument("--out", type=Path, help="output CSV path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=estimator.DEFAULT_RESTARTS)
    p.add_argument("--max-iters", type=int, default=estimator.DEFAULT_MAX_ITERS)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fidelity", help="optimal teleportation fidelity for a given FEF")
    p.add_argument("F", type=_number, help="fully entangled fraction, e.g. 0.5 or 2/7")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_fidelity)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fef: error: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, ParseError) as exc:
        print(f"fef: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"fef: {exc}", file=sys.stderr)
        return 2
    except FEFError as exc:
        print(f"fef: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
