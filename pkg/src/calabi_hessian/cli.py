"""Command-line front end.

Every flag can also be supplied through an environment variable named
``CALABI_HESSIAN_<FLAG>`` (upper case, dashes as underscores), which is useful
for batch jobs; explicit flags take precedence.

Exit codes: 0 success / criteria pass, 2 criteria fail (and, for ``solve``,
not solved), 3 dichotomy violation, 4 degenerate class, 64 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .criteria import classify, fmt_real
from .errors import InvalidArgument
from .polynomials import CalabiParams, build_F, intersection_ratio
from .solver import solve

ENV_PREFIX = "CALABI_HESSIAN_"

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_DICHOTOMY = 3
EXIT_DEGENERATE = 4
EXIT_USAGE = 64

COMMANDS = ("poly", "criteria", "solve", "scan", "selftest")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class ScanGrid:
    p_min: Fraction
    p_max: Fraction
    q_min: Fraction
    q_max: Fraction
    cells_p: int
    cells_q: int

    def points(self):
        def axis(lo, hi, cells):
            if cells == 1:
                return [lo]
            return [lo + (hi - lo) * i / (cells - 1) for i in range(cells)]

        return [(p, q) for p in axis(self.p_min, self.p_max, self.cells_p)
                for q in axis(self.q_min, self.q_max, self.cells_q)]


@dataclass
class RunConfig:
    command: str
    params: Optional[CalabiParams]
    scan_grid: Optional[ScanGrid]
    tol: float
    step: Optional[float]
    epsilon: Optional[float]
    output_format: str
    output_path: Optional[str]
    jobs: int = 1
    samples: int = 20000


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="calabi-hessian", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    for name in ("m", "n", "k", "l"):
        parser.add_argument(f"--{name}", type=int, default=_env(name))
    for name in ("p", "q", "b"):
        parser.add_argument(f"--{name}", type=str, default=_env(name),
                            help="rational, e.g. 3/2 or 0.25")
    parser.add_argument("--tol", type=float, default=_env("tol", 1e-12))
    parser.add_argument("--step", type=float, default=_env("step"))
    parser.add_argument("--epsilon", type=float, default=_env("epsilon"))
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"),
                        default=_env("format"))
    parser.add_argument("--out", default=_env("out"))
    parser.add_argument("--jobs", type=int, default=_env("jobs", 1))
    for name in ("p-min", "p-max", "q-min", "q-max"):
        parser.add_argument(f"--{name}", type=str, default=_env(name))
    for name in ("cells-p", "cells-q"):
        parser.add_argument(f"--{name}", type=int, default=_env(name))
    parser.add_argument("--samples", type=int, default=_env("samples", 20000),
                        help="cone samples per property for selftest")
    return parser


_NEGATIVE = re.compile(r"^-[0-9.]")


def _attach_negative_values(argv: List[str]) -> List[str]:
    """Rewrite ``--p -1/2`` as ``--p=-1/2``; argparse only accepts plain negative decimals."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token.startswith("--") and "=" not in token and i + 1 < len(argv) \
                and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def parse_config(argv: List[str]) -> RunConfig:
    args = build_parser().parse_args(_attach_negative_values(list(argv)))
    tol = float(args.tol)
    step = None if args.step is None else float(args.step)
    epsilon = None if args.epsilon is None else float(args.epsilon)
    if not tol > 0 or (step is not None and not step > 0) or (epsilon is not None and not epsilon > 0):
        raise UsageError("tol, step and epsilon must be positive")
    jobs = int(args.jobs)
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")
    fmt = args.output_format or ("csv" if args.command == "scan" else "json")
    if fmt == "csv" and args.command in ("poly", "criteria"):
        raise UsageError(f"{args.command} only writes json")

    params = None
    if args.command != "selftest":
        missing = [n for n in ("m", "n", "k", "l", "b") if getattr(args, n) is None]
        if args.command != "scan":
            missing += [n for n in ("p", "q") if getattr(args, n) is None]
        if missing:
            raise UsageError("missing parameters: " + ", ".join("--" + n for n in missing))
        p = _rational(args.p) if args.p is not None else Fraction(1)
        q = _rational(args.q) if args.q is not None else _rational(args.b)
        try:
            params = CalabiParams(int(args.m), int(args.n), int(args.k), int(args.l), p, q,
                                  _rational(args.b))
        except InvalidArgument as exc:
            raise UsageError(str(exc)) from exc

    grid = None
    if args.command == "scan":
        values = [getattr(args, n) for n in ("p_min", "p_max", "q_min", "q_max", "cells_p", "cells_q")]
        if any(v is None for v in values):
            raise UsageError("scan needs --p-min --p-max --q-min --q-max --cells-p --cells-q")
        grid = ScanGrid(*(_rational(v) for v in values[:4]), int(values[4]), int(values[5]))
        if grid.cells_p < 1 or grid.cells_q < 1:
            raise UsageError("grid needs at least one cell per axis")
    return RunConfig(args.command, params, grid, tol, step, epsilon, fmt, args.out, jobs,
                     int(args.samples))


def _emit(text: str, config: RunConfig):
    if config.output_path:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_poly(config: RunConfig) -> int:
    params = config.params
    report = classify(params)
    out = {
        "params": _params_json(params),
        "G_k": params.G(params.k).to_json(),
        "G_l": params.G(params.l).to_json(),
        "mu": fmt_real(report.mu),
        "mu_exact": None if report.mu is None else str(report.mu),
        "F": None if report.mu is None else build_F(params, report.mu).to_json(),
        "intersection_ratios": {
            "normalization": "C = 1; values are defined up to a positive constant",
            "values": [fmt_real(intersection_ratio(params, j)) for j in range(params.N + 1)],
        },
    }
    _emit(_dumps(out), config)
    if report.mu is None:
        print("degenerate class: mu is undefined", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def _params_json(params: CalabiParams) -> dict:
    return {"m": params.m, "n": params.n, "k": params.k, "l": params.l,
            "p": str(params.p), "q": str(params.q), "b": str(params.b)}


def cmd_criteria(config: RunConfig) -> int:
    report = classify(config.params)
    _emit(_dumps(report.to_json()), config)
    if report.verdict == "degenerate":
        return EXIT_DEGENERATE
    return EXIT_OK if report.passed else EXIT_FAIL


def _solve_exit(result) -> int:
    if result.criteria.verdict == "degenerate":
        return EXIT_DEGENERATE
    if result.dichotomy_violation:
        return EXIT_DICHOTOMY
    return EXIT_OK if result.solved else EXIT_FAIL


def cmd_solve(config: RunConfig) -> int:
    result = solve(config.params, config.step, config.tol, config.epsilon)
    if config.output_format == "csv":
        _emit(result.curve.to_csv() if result.curve else "x,y,yprime,residual,admissible\n", config)
    else:
        out = {"params": _params_json(config.params)}
        out.update(result.to_json())
        _emit(_dumps(out), config)
    code = _solve_exit(result)
    if code == EXIT_DICHOTOMY:
        print(
            f"DICHOTOMY VIOLATION: criteria verdict {result.criteria.verdict!r} but solver "
            f"status {result.status!r} ({result.message})",
            file=sys.stderr,
        )
    elif result.message:
        print(result.message, file=sys.stderr)
    return code


def _scan_cell(args):
    params, step, tol, epsilon = args
    try:
        result = solve(params, step, tol, epsilon)
    except Exception as exc:  # recorded in-row; a scan never aborts
        return {"mu": None, "verdict": "error", "status": f"error:{type(exc).__name__}",
                "terminal": None, "violation": False}
    return {
        "mu": result.criteria.mu,
        "verdict": result.criteria.verdict,
        "status": "" if result.status == "degenerate" else result.status,
        "terminal": result.terminal_residual,
        "violation": result.dichotomy_violation,
    }


def run_scan(config: RunConfig) -> List[dict]:
    base = config.params
    tasks = [(base.replace(p=p, q=q), config.step, config.tol, config.epsilon)
             for p, q in config.scan_grid.points()]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            cells = list(pool.map(_scan_cell, tasks, chunksize=8))
    else:
        cells = [_scan_cell(t) for t in tasks]
    rows = []
    for (params, *_), cell in zip(tasks, cells):
        cell.update(p=params.p, q=params.q)
        rows.append(cell)
    return rows


def cmd_scan(config: RunConfig) -> int:
    rows = run_scan(config)
    if config.output_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "q", "mu", "criteria_verdict", "solver_status", "terminal_residual"])
        for r in rows:
            writer.writerow([fmt_real(r["p"]), fmt_real(r["q"]), fmt_real(r["mu"]) or "",
                             r["verdict"], r["status"], fmt_real(r["terminal"]) or ""])
        _emit(buf.getvalue(), config)
    else:
        _emit(_dumps([{"p": fmt_real(r["p"]), "q": fmt_real(r["q"]), "mu": fmt_real(r["mu"]),
                       "criteria_verdict": r["verdict"], "solver_status": r["status"],
                       "terminal_residual": fmt_real(r["terminal"])} for r in rows]), config)
    violations = sum(r["violation"] for r in rows)
    if violations:
        print(f"DICHOTOMY VIOLATION in {violations} cell(s)", file=sys.stderr)
        return EXIT_DICHOTOMY
    return EXIT_OK


def cmd_selftest(config: RunConfig) -> int:
    from .selftest import run_selftest

    ok = run_selftest(samples=config.samples)
    return EXIT_OK if ok else 1


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"calabi-hessian: {exc}", file=sys.stderr)
        return EXIT_USAGE
    handler = {
        "poly": cmd_poly,
        "criteria": cmd_criteria,
        "solve": cmd_solve,
        "scan": cmd_scan,
        "selftest": cmd_selftest,
    }[config.command]
    return handler(config)


if __name__ == "__main__":
    sys.exit(main())
