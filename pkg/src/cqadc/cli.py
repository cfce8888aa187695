"""Command-line driver writing reproducible CSV curves.

Subcommands: ``sweep``, ``capacity``, ``povm`` and ``bounds``. Options may
also come from a JSON file given with ``--config``; command-line flags take
precedence over file values.

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
4 induced channel not symmetric.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bounds, measurement
from .channel import adc, eps_bsc, pm_states
from .codes import LinearCode, load_code
from .errors import ConvergenceError, CqadcError, DimensionError, DomainError, StructureError, ValidationError

logger = logging.getLogger("cqadc")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_STRUCTURE = 0, 2, 3, 4
STRATEGIES = ("individual_ml", "collective_optimal", "pgm", "converse", "rcb")
DEFAULTS = {
    "code": "spc_3_2",
    "gamma_start": 0.0,
    "gamma_stop": 1.0,
    "gamma_step": 0.01,
    "strategies": "individual_ml,collective_optimal",
    "tol": None,
    "out": None,
    "resolution": 1e-3,
    "gamma": 0.5,
    "json": False,
}


class ConfigError(CqadcError):
    pass


def fmt(x) -> str:
    """Nine significant digits; empty for missing values."""
    return "" if x is None else f"{x:.9g}"


@dataclass(frozen=True)
class SweepConfig:
    code: LinearCode
    gammas: tuple
    strategies: tuple
    tol: float | None
    out: str | None


def gamma_grid(start: float, stop: float, step: float) -> tuple:
    if not 0.0 <= start <= stop <= 1.0 or step <= 0:
        raise ConfigError(f"need 0 <= start <= stop <= 1 and step > 0; got {start}, {stop}, {step}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(min(start + k * step, 1.0), 12) for k in range(count))


def parse_strategies(text: str) -> tuple:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in STRATEGIES]
    if bad or not names:
        raise ConfigError(f"unknown strategies {bad}; choose from {', '.join(STRATEGIES)}")
    return names


def _binary_code(ref: str) -> LinearCode:
    code = load_code(ref)
    if code.q != 2:
        raise ConfigError("sweeps use the binary {|+>, |->} input states; the code must have q = 2")
    return code


def header(strategies) -> list:
    cols = ["gamma"]
    for s in strategies:
        cols.append(s)
        if s == "collective_optimal":
            cols.append("hykl_residual")
    return cols


def sweep_rows(cfg: SweepConfig, warnings: list) -> list:
    """One list of cell strings per grid point, in grid order."""
    code, states, symbol_povm = cfg.code, pm_states(), measurement.pm_povm()
    priors = np.full(code.M, 1.0 / code.M)
    rows = []
    for g in cfg.gammas:
        ch = adc(g)
        eps = eps_bsc(g)
        outs = None
        cells = [fmt(g)]
        for s in cfg.strategies:
            if s == "individual_ml":
                value = measurement.individual_success(code, states, symbol_povm, ch)
            elif s == "collective_optimal":
                outs = outs or measurement.code_outputs(code, states, ch)
                try:
                    res = measurement.optimal_povm(outs, priors, cfg.tol)
                except ConvergenceError as exc:
                    warnings.append([fmt(g), s, "non-convergence", fmt(exc.best_residual)])
                    cells += ["", ""]
                    continue
                value = res.success_probability
                cells += [fmt(value), fmt(res.hykl_residual)]
                continue
            elif s == "pgm":
                outs = outs or measurement.code_outputs(code, states, ch)
                value = measurement.success_prob(measurement.pgm(outs, priors), outs, priors)
            elif s == "converse":
                value = bounds.qsc_converse(code.n, code.M, 2, eps).value
            else:
                value = bounds.qsc_rcb(code.n, code.M, 2, eps).value
            if not 1.0 / code.M - 1e-9 <= value <= 1.0 + 1e-9:
                warnings.append([fmt(g), s, "out-of-range", fmt(value)])
            cells.append(fmt(value))
        rows.append(cells)
    return rows


def _csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")


def cmd_sweep(cfg: SweepConfig) -> int:
    warnings: list = []
    rows = [header(cfg.strategies)] + sweep_rows(cfg, warnings)
    _emit(_csv_text(rows), cfg.out)
    if warnings:
        log = _csv_text([["gamma", "strategy", "warning", "value"]] + warnings)
        if cfg.out is None:
            sys.stderr.write(log)
        else:
            Path(cfg.out + ".log").write_text(log, newline="\n")
        if any(w[2] == "non-convergence" for w in warnings):
            return EXIT_SOLVER
    return EXIT_OK


def cmd_capacity(gammas, resolution: float, tol: float | None, out: str | None) -> int:
    rows = [["gamma", "c_bsc", "two_thirds_c_qsc"]]
    for g in gammas:
        pair = bounds.capacities(g, tol)
        rows.append([fmt(g), fmt(pair.c_bsc), fmt(2.0 / 3.0 * pair.c_qsc)])
    crossing = bounds.capacity_crossing(resolution, tol=tol)
    rows.append(["crossing", fmt(crossing)])
    _emit(_csv_text(rows), out)
    print(f"(2/3) C_QSC > C_BSC for gamma above {crossing:.6f}", file=sys.stderr)
    return EXIT_OK


def cmd_povm(code: LinearCode, gamma: float, tol: float | None, as_json: bool) -> int:
    states, ch = pm_states(), adc(gamma)
    res = measurement.collective_optimum(code, states, ch, tol)
    report = {
        "M": code.M,
        "n": code.n,
        "gamma": gamma,
        "success_probability": res.success_probability,
        "hykl_residual": res.hykl_residual,
        "iterations": res.iterations,
        "individual_ml_success": measurement.individual_success(code, states, measurement.pm_povm(), ch),
    }
    if as_json:
        print(json.dumps(report))
    else:
        for key, value in report.items():
            print(f"{key}: {value:.9g}" if isinstance(value, float) else f"{key}: {value}")
    return EXIT_OK


def cmd_bounds(n: int, M: int, q: int, eps: float, as_json: bool) -> int:
    conv = bounds.qsc_converse(n, M, q, eps)
    rcb = bounds.qsc_rcb(n, M, q, eps)
    report = {"n": n, "M": M, "q": q, "eps": eps, "converse": conv.value, "rcb": rcb.value}
    if as_json:
        print(json.dumps(report))
    else:
        print(f"converse: {conv.value:.9g}  (t={conv.detail['t']}, A_t={conv.detail['A_t']:.9g})")
        print(f"rcb: {rcb.value:.9g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqadc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with option values")
        p.add_argument("--tol", type=float, help="HYKL residual tolerance")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--json", action="store_const", const=True, help="machine-readable output")

    def grid(p):
        p.add_argument("--gamma-start", type=float)
        p.add_argument("--gamma-stop", type=float)
        p.add_argument("--gamma-step", type=float)

    p = sub.add_parser("sweep", help="success probability versus damping")
    common(p)
    grid(p)
    p.add_argument("--code", help="code name or JSON definition path")
    p.add_argument("--strategies", help=f"comma-separated subset of {','.join(STRATEGIES)}")

    p = sub.add_parser("capacity", help="induced BSC and QSC capacities and their crossing")
    common(p)
    grid(p)
    p.add_argument("--resolution", type=float)

    p = sub.add_parser("povm", help="certified optimal collective measurement for one code")
    common(p)
    p.add_argument("--code", help="code name or JSON definition path")
    p.add_argument("--gamma", type=float)

    p = sub.add_parser("bounds", help="q-SC converse and random-coding bounds")
    common(p)
    p.add_argument("--n", type=int, required=False)
    p.add_argument("--M", type=int, required=False)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--eps", type=float, required=False)
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge defaults, the optional JSON config file and explicit flags."""
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            file_opts = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_opts, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in file_opts.items():
            key = key.replace("-", "_")
            if key == "strategies" and isinstance(value, list):
                value = ",".join(value)
            opts[key] = value
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "config", "verbose"):
            opts[key] = value
    return opts


def _run(args: argparse.Namespace) -> int:
    opts = resolve_options(args)
    tol = None if opts["tol"] is None else float(opts["tol"])
    if args.command == "sweep":
        cfg = SweepConfig(
            code=_binary_code(str(opts["code"])),
            gammas=gamma_grid(float(opts["gamma_start"]), float(opts["gamma_stop"]), float(opts["gamma_step"])),
            strategies=parse_strategies(str(opts["strategies"])),
            tol=tol,
            out=opts["out"],
        )
        return cmd_sweep(cfg)
    if args.command == "capacity":
        gammas = gamma_grid(float(opts["gamma_start"]), float(opts["gamma_stop"]), float(opts["gamma_step"]))
        return cmd_capacity(gammas, float(opts["resolution"]), tol, opts["out"])
    if args.command == "povm":
        return cmd_povm(_binary_code(str(opts["code"])), float(opts["gamma"]), tol, bool(opts["json"]))
    missing = [k for k in ("n", "M", "eps") if opts.get(k) is None]
    if missing:
        raise ConfigError(f"bounds needs --{', --'.join(missing)}")
    return cmd_bounds(int(opts["n"]), int(opts["M"]), int(opts.get("q") or 2), float(opts["eps"]), bool(opts["json"]))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except ConvergenceError as exc:
        logger.error("%s (best residual %.3e)", exc, exc.best_residual)
        return EXIT_SOLVER
    except StructureError as exc:
        logger.error("%s", exc)
        return EXIT_STRUCTURE
    except (ConfigError, ValidationError, DomainError, DimensionError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
