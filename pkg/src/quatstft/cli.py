"""Command-line entry point: ``quatstft <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 malformed CSV,
3 file-system error, 4 invalid configuration.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

from .bargmann import TruncationRisk, bargmann_coefficients
from .basis import hermite_psi
from .csvio import (
    IoError,
    ParseError,
    read_grid,
    read_signal,
    write_atomic,
    write_coefficients,
    write_grid,
    write_hermite,
    write_signal,
)
from .quadrature import BadGridSpec, LineGrid, default_time_grid, make_grid
from .quaternion import ImaginaryUnit
from .qft import QftPlan, qft_forward, qft_inverse
from .qstft import qstft_grid, qstft_reconstruct
from .verify import SUITES, UnknownCheck, parse_tolerances, report_json, residual_table, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_IO = 3
EXIT_CONFIG = 4

COMMANDS = ("analyze", "reconstruct", "qft", "bargmann", "hermite", "verify")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    unit: ImaginaryUnit
    grids: Dict[str, LineGrid] = field(default_factory=dict)
    nu: float = 2 * math.pi
    kmax: int = 40
    k: int = 0
    tolerances: Dict[str, float] = field(default_factory=dict)
    inp: Optional[str] = None
    out: Optional[str] = None
    suite: str = "all"
    route: str = "windowed"
    inverse: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quatstft", description="Quaternion short-time Fourier transform toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def axis(sp, name, lo, hi, n, what):
        d = (lambda v: f"default {v}") if lo is not None else (lambda v: "default: standard time grid")
        sp.add_argument(f"--{name}min", type=float, default=lo, help=f"{what} lower bound ({d(lo)})")
        sp.add_argument(f"--{name}max", type=float, default=hi, help=f"{what} upper bound ({d(hi)})")
        sp.add_argument(f"--n{name}", type=int, default=n, help=f"{what} node count ({d(n)})")

    a = sub.add_parser("analyze", help="time-frequency grid of a signal")
    a.add_argument("--in", dest="inp", required=True)
    a.add_argument("--out", required=True)
    axis(a, "x", -4.0, 4.0, 129, "time shift")
    axis(a, "w", -4.0, 4.0, 129, "frequency")
    a.add_argument("--unit", default="i", help="i, j, k or x,y,z (normalized)")
    a.add_argument("--route", choices=("windowed", "bargmann"), default="windowed")

    r = sub.add_parser("reconstruct", help="signal from a time-frequency grid")
    r.add_argument("--in", dest="inp", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--unit", default="i")
    axis(r, "t", None, None, None, "output time axis")

    q = sub.add_parser("qft", help="left-sided quaternion Fourier transform")
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--out", required=True)
    q.add_argument("--unit", default="i")
    q.add_argument("--inverse", action="store_true")
    q.add_argument("--lo", type=float, default=None, help="output axis lower bound (default -8)")
    q.add_argument("--hi", type=float, default=None, help="output axis upper bound (default 8)")
    q.add_argument("--n", type=int, default=None, help="output axis node count (default 1024)")

    b = sub.add_parser("bargmann", help="Fock power-series coefficients of a signal")
    b.add_argument("--in", dest="inp", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--nu", type=float, default=2 * math.pi)
    b.add_argument("--kmax", type=int, default=40)

    h = sub.add_parser("hermite", help="samples of a normalized weighted Hermite function")
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--nu", type=float, default=2 * math.pi)
    h.add_argument("--out", required=True)
    axis(h, "t", None, None, None, "time axis")

    v = sub.add_parser("verify", help="run identity checks and write a JSON report")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--report", default=None, help="report path (default: stdout)")
    v.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    return p


def _grid(lo, hi, n, fallback: LineGrid, what: str) -> LineGrid:
    lo = fallback.lo if lo is None else lo
    hi = fallback.hi if hi is None else hi
    n = fallback.n if n is None else n
    try:
        return make_grid(lo, hi, n)
    except BadGridSpec as exc:
        raise ConfigError(f"{what}: {exc}") from None


def _check_output(path: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(d):
        raise IoError(f"output directory {d} does not exist")


def make_config(ns: argparse.Namespace) -> RunConfig:
    """Validate every option before any computation."""
    unit_text = getattr(ns, "unit", "i")
    try:
        unit = ImaginaryUnit.parse(unit_text)
    except ValueError as exc:
        raise ConfigError(f"--unit: {exc}") from None
    cfg = RunConfig(ns.command, unit)
    cfg.inp = getattr(ns, "inp", None)
    cfg.out = getattr(ns, "out", None) or getattr(ns, "report", None)
    if ns.command == "analyze":
        axis = make_grid(-4.0, 4.0, 129)
        cfg.grids["x"] = _grid(ns.xmin, ns.xmax, ns.nx, axis, "x axis")
        cfg.grids["w"] = _grid(ns.wmin, ns.wmax, ns.nw, axis, "w axis")
        cfg.route = ns.route
    elif ns.command in ("reconstruct", "hermite"):
        nu = getattr(ns, "nu", 2 * math.pi)
        if not (nu > 0 and math.isfinite(nu)):
            raise ConfigError("--nu must be positive")
        cfg.nu = nu
        cfg.grids["t"] = _grid(ns.tmin, ns.tmax, ns.nt, default_time_grid(nu), "t axis")
        if ns.command == "hermite":
            if ns.k < 0:
                raise ConfigError("--k must be >= 0")
            cfg.k = ns.k
    elif ns.command == "qft":
        cfg.grids["out"] = _grid(ns.lo, ns.hi, ns.n, default_time_grid(), "output axis")
        cfg.inverse = ns.inverse
    elif ns.command == "bargmann":
        if not (ns.nu > 0 and math.isfinite(ns.nu)):
            raise ConfigError("--nu must be positive")
        if ns.kmax < 0:
            raise ConfigError("--kmax must be >= 0")
        cfg.nu, cfg.kmax = ns.nu, ns.kmax
    elif ns.command == "verify":
        cfg.suite = ns.suite
        try:
            cfg.tolerances = parse_tolerances(ns.tol)
        except UnknownCheck as exc:
            raise ConfigError(f"--tol: unknown check {exc.args[0]!r}") from None
        except ValueError as exc:
            raise ConfigError(f"--tol: {exc}") from None
    return cfg


def run(cfg: RunConfig) -> int:
    if cfg.out:
        _check_output(cfg.out)
    if cfg.command == "analyze":
        f = read_signal(cfg.inp)
        V = qstft_grid(f, cfg.grids["x"], cfg.grids["w"], cfg.unit, cfg.route)
        write_grid(cfg.out, V)
    elif cfg.command == "reconstruct":
        V = read_grid(cfg.inp, cfg.unit)
        write_signal(cfg.out, qstft_reconstruct(V, cfg.grids["t"]))
    elif cfg.command == "qft":
        f = read_signal(cfg.inp)
        if cfg.inverse:
            plan = QftPlan(cfg.unit, cfg.grids["out"], f.grid)
            write_signal(cfg.out, qft_inverse(f, plan))
        else:
            plan = QftPlan(cfg.unit, f.grid, cfg.grids["out"])
            write_signal(cfg.out, qft_forward(f, plan))
    elif cfg.command == "bargmann":
        f = read_signal(cfg.inp)
        write_coefficients(cfg.out, bargmann_coefficients(f, cfg.nu, cfg.kmax))
    elif cfg.command == "hermite":
        t = cfg.grids["t"].nodes
        write_hermite(cfg.out, t, hermite_psi(cfg.k, cfg.nu, t))
    elif cfg.command == "verify":
        report = run_suite(cfg.suite, cfg.tolerances)
        text = report_json(report)
        sys.stderr.write(residual_table(report))
        if cfg.out:
            write_atomic(cfg.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK if report["pass"] else EXIT_VERIFY_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = make_config(ns)
        with warnings.catch_warnings():
            warnings.simplefilter("always", TruncationRisk)
            return run(cfg)
    except ConfigError as exc:
        print(f"quatstft: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"quatstft: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IoError as exc:
        print(f"quatstft: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
