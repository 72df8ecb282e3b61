"""Command-line interface: figure data, single-channel reports, verification.

Commands
--------
``regions``  region label and GDOF on an (alpha, beta) grid (CSV or JSON)
``curve``    GDOF against alpha for a list of beta values
``rates``    every scheme and bound for one finite channel (JSON)
``verify``   grid invariants, slope checks and the min-max audit (JSON)
``slope``    regression slope at one (alpha, beta) point (JSON)

Settings come from command-line flags, then a ``key=value`` config file
(``--config``), then built-in defaults, in that order of precedence.
Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bounds import sum_rate_upper_bound
from .channel import ChannelParams
from .estimator import DEFAULT_RHO_LIST, verify_point
from .gdof import (
    BOUNDARY_EPS,
    classify_grid,
    consistency_report,
    gdof_grid,
    gdof_upper_bounds,
    region_conditions,
    region_values,
)
from .optimize import OptimizerSettings
from .schemes import all_schemes, best_achievable, scheme_gdof_grid

__all__ = [
    "SweepConfig",
    "ConfigError",
    "REPRESENTATIVE_POINTS",
    "load_config_file",
    "build_config",
    "cmd_regions",
    "cmd_curve",
    "cmd_rates",
    "cmd_verify",
    "cmd_slope",
    "main",
]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# One point inside each of the nine regions, in region order.
REPRESENTATIVE_POINTS = (
    (3.0, 0.5), (0.5, 1.5), (1.5, 0.25), (1.5, 1.0), (1.2, 1.5),
    (0.6, 0.1), (1.0, 3.0), (0.8, 0.5), (0.9, 0.1),
)

AGREEMENT_TOL = 1e-9

# Default beta values for ``curve`` when no beta range or list is given.
CURVE_BETAS = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0)


class ConfigError(ValueError):
    """Invalid sweep configuration (maps to exit code 2)."""


def _parse_number(text: str) -> float:
    """Float parser that also accepts ``2^24`` / ``2**24`` powers."""
    s = str(text).strip()
    for op in ("**", "^"):
        if op in s:
            base, exp = s.split(op, 1)
            return float(base) ** float(exp)
    return float(s)


def _parse_list(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    items = [t for t in str(text).replace(";", ",").split(",") if t.strip()]
    return tuple(_parse_number(t) for t in items)


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep command needs. Validated on construction."""

    alpha_min: float = 0.0
    alpha_max: float = 3.0
    alpha_step: float = 0.01
    beta_min: float = 0.0
    beta_max: float = 3.0
    beta_step: float = 0.01
    beta_list: Optional[tuple[float, ...]] = None
    rho_list: tuple[float, ...] = DEFAULT_RHO_LIST
    tol: float = 0.05
    grid_step: float = 0.05
    out: Optional[str] = None
    format: str = "csv"
    threads: int = 1

    def __post_init__(self):
        for name in ("alpha", "beta"):
            lo, hi, step = (getattr(self, f"{name}_{k}") for k in ("min", "max", "step"))
            if not all(math.isfinite(v) for v in (lo, hi, step)):
                raise ConfigError(f"{name} range must be finite")
            if step <= 0:
                raise ConfigError(f"{name}-step must be positive")
            if lo < 0:
                raise ConfigError(f"{name}-min must be nonnegative")
            if hi < lo:
                raise ConfigError(f"{name} range is empty ({lo} > {hi})")
        if self.beta_list is not None:
            if len(self.beta_list) == 0:
                raise ConfigError("beta-list is empty")
            if any(b < 0 for b in self.beta_list):
                raise ConfigError("beta-list values must be nonnegative")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        try:
            self.optimizer()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        rhos = self.rho_list
        if len(rhos) < 4 or any(r <= 1 for r in rhos) or any(b <= a for a, b in zip(rhos, rhos[1:])):
            raise ConfigError("rho-list needs >= 4 strictly increasing values above 1")

    def optimizer(self) -> OptimizerSettings:
        return OptimizerSettings(grid_step=self.grid_step)

    def alpha_axis(self) -> np.ndarray:
        return _axis(self.alpha_min, self.alpha_max, self.alpha_step)

    def beta_axis(self) -> np.ndarray:
        if self.beta_list is not None:
            return np.asarray(self.beta_list, dtype=float)
        return _axis(self.beta_min, self.beta_max, self.beta_step)


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive grid ``lo, lo+step, ...`` up to ``hi`` (with rounding slack)."""
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    # Rounding to 12 decimals keeps 0.07 as 0.07 rather than 0.07000000000000001.
    return np.round(lo + step * np.arange(n), 12) + 0.0


# ---------------------------------------------------------------------------
# configuration plumbing

_CONVERTERS = {
    "alpha_min": _parse_number,
    "alpha_max": _parse_number,
    "alpha_step": _parse_number,
    "beta_min": _parse_number,
    "beta_max": _parse_number,
    "beta_step": _parse_number,
    "beta_list": _parse_list,
    "rho_list": _parse_list,
    "tol": _parse_number,
    "grid_step": _parse_number,
    "out": str,
    "format": str,
    "threads": int,
}


def load_config_file(path) -> dict:
    """Read a flat ``key=value`` file; keys mirror the long flag names.

    Blank lines and ``#`` comments are ignored; ``-`` and ``_`` are
    interchangeable in keys.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(flags: dict, file_values: dict | None = None) -> SweepConfig:
    """Merge flags over config-file values over defaults."""
    merged: dict = {}
    for source in (file_values or {}, {k: v for k, v in flags.items() if v is not None}):
        for key, value in source.items():
            if key in _CONVERTERS:
                merged[key] = value
    kwargs = {}
    for key, value in merged.items():
        try:
            kwargs[key] = _CONVERTERS[key](value) if isinstance(value, str) else value
        except ValueError:
            raise ConfigError(f"bad value for {key}: {value!r}") from None
    if "rho_list" in kwargs:
        kwargs["rho_list"] = tuple(kwargs["rho_list"])
    if "beta_list" in kwargs:
        kwargs["beta_list"] = tuple(kwargs["beta_list"])
    return SweepConfig(**kwargs)


# ---------------------------------------------------------------------------
# output helpers

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x) + 0.0, ".12g")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _table(header: Sequence[str], columns: Sequence[np.ndarray], fmt: str) -> str:
    if fmt == "json":
        rows = [
            {h: (int(v) if isinstance(v, (np.integer,)) else float(v)) for h, v in zip(header, row)}
            for row in zip(*columns)
        ]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _row_chunks(n: int, threads: int):
    size = max(1, math.ceil(n / threads))
    return [(s, min(n, s + size)) for s in range(0, n, size)]


# ---------------------------------------------------------------------------
# commands

def cmd_regions(config: SweepConfig) -> str:
    """Region label and GDOF on the grid, alpha-major row order."""
    alpha = config.alpha_axis()
    beta = config.beta_axis()

    def rows(span):
        a, b = np.meshgrid(alpha[span[0]:span[1]], beta, indexing="ij")
        return a.ravel(), b.ravel(), classify_grid(a, b).ravel(), gdof_grid(a, b).ravel()

    # pool.map keeps chunk order, so the output does not depend on threads.
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        parts = list(pool.map(rows, _row_chunks(len(alpha), config.threads)))
    columns = [np.concatenate([p[k] for p in parts]) for k in range(4)]
    text = _table(("alpha", "beta", "region", "d"), columns, config.format)
    _emit(text, config.out)
    return text


def cmd_curve(config: SweepConfig) -> str:
    """GDOF against alpha, one curve per beta value (beta-major order)."""
    alpha = config.alpha_axis()
    beta = config.beta_axis()
    b, a = np.meshgrid(beta, alpha, indexing="ij")
    a, b = a.ravel(), b.ravel()
    text = _table(("alpha", "beta", "d"), [a, b, gdof_grid(a, b)], config.format)
    _emit(text, config.out)
    return text


def rates_report(params: ChannelParams, opt: OptimizerSettings | None = None) -> dict:
    """Per-scheme results, the bound report and the achievable-vs-bound margin."""
    opt = opt or OptimizerSettings()
    results = all_schemes(params, opt)
    best = best_achievable(params, results=results)
    seeds = [r.coeffs for r in results if r.applicable and r.coeffs is not None]
    bounds = sum_rate_upper_bound(params, opt.with_seeds(seeds))
    return {
        "channel": {"h_d": params.h_d, "h_c": params.h_c, "h_r": params.h_r, "P": params.P},
        "schemes": [r.to_dict() for r in results],
        "best": {"scheme": best.scheme.name, "sym_rate": best.sym_rate, "sum_rate": best.sum_rate},
        "bounds": bounds.to_dict(),
        "margin": bounds.sum_rate_min - best.sum_rate,
    }


def cmd_rates(params: ChannelParams, config: SweepConfig | None = None) -> dict:
    config = config or SweepConfig()
    report = rates_report(params, config.optimizer())
    _emit(_json(report), config.out)
    return report


def _grid_checks(alpha: np.ndarray, beta: np.ndarray, uniform_steps) -> dict:
    """The closed-form invariants on the grid, each as a failure count."""
    a, b = np.meshgrid(alpha, beta, indexing="ij")
    labels = classify_grid(a, b)
    d = gdof_grid(a, b)
    checks = {}

    checks["coverage"] = {"failures": int(np.count_nonzero(labels == 0))}

    conds = region_conditions(a, b)
    vals = region_values(a, b)
    hi = np.where(conds, vals, -np.inf).max(axis=0)
    lo = np.where(conds, vals, np.inf).min(axis=0)
    spread = np.where(conds.any(axis=0), hi - lo, 0.0)
    checks["overlap_agreement"] = {
        "failures": int(np.count_nonzero(spread > BOUNDARY_EPS)),
        "max_spread": float(spread.max()),
    }

    da_step, db_step = uniform_steps
    fails = 0
    worst = 0.0
    if len(alpha) > 1 and da_step is not None:
        diff = np.abs(np.diff(d, axis=0))
        fails += int(np.count_nonzero(diff > 2 * da_step + BOUNDARY_EPS))
        worst = max(worst, float(diff.max()))
    if len(beta) > 1 and db_step is not None:
        diff = np.abs(np.diff(d, axis=1))
        fails += int(np.count_nonzero(diff > 2 * db_step + BOUNDARY_EPS))
        worst = max(worst, float(diff.max()))
    checks["continuity"] = {"failures": fails, "max_step_change": worst}

    best = np.nanmax(scheme_gdof_grid(a, b), axis=0)
    gap = np.abs(best - d)
    checks["scheme_table_agreement"] = {
        "failures": int(np.count_nonzero(~(gap <= AGREEMENT_TOL))),
        "max_gap": float(np.nanmax(gap)),
    }

    order = np.argsort(beta, kind="stable")
    drops = np.diff(d[:, order], axis=1) < -BOUNDARY_EPS if len(beta) > 1 else np.zeros(0, bool)
    checks["monotone_in_beta"] = {"failures": int(np.count_nonzero(drops))}

    fails = 0
    for i, x in enumerate(alpha):
        for j, y in enumerate(beta):
            if d[i, j] > gdof_upper_bounds(x, y).minimum + BOUNDARY_EPS:
                fails += 1
    checks["bound_soundness"] = {"failures": fails}
    return checks


def cmd_verify(config: SweepConfig) -> tuple[int, dict]:
    """Run every invariant; returns ``(exit_code, summary)``."""
    alpha = config.alpha_axis()
    beta = config.beta_axis()
    steps = (config.alpha_step, None if config.beta_list is not None else config.beta_step)
    checks = _grid_checks(alpha, beta, steps)

    opt = config.optimizer()

    def slope(point):
        return verify_point(point[0], point[1], config.rho_list, config.tol, opt)

    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        slopes = list(pool.map(slope, REPRESENTATIVE_POINTS))
    checks["slope_sandwich"] = {
        "failures": sum(not s.passed for s in slopes),
        "tol": config.tol,
        "points": [
            {"alpha": s.report.alpha, "beta": s.report.beta,
             "achieved_slope": s.report.achieved_slope, "bound_slope": s.report.bound_slope,
             "closed_form": s.report.closed_form, "error": s.error, "passed": s.passed}
            for s in slopes
        ],
    }

    discrepancies = consistency_report(alpha=alpha, beta=beta)
    failures = sum(c["failures"] for c in checks.values())
    summary = {
        "grid": {"alpha": [float(alpha[0]), float(alpha[-1]), len(alpha)],
                 "beta": [float(beta.min()), float(beta.max()), len(beta)]},
        "failures": failures,
        "passed": failures == 0,
        "checks": checks,
        # Informational only: where the closed min-max expression and the
        # region table disagree. These never fail the run.
        "minmax_discrepancies": {
            "count": len(discrepancies),
            "columns": ["alpha", "beta", "region", "table_value", "minmax_value"],
            "records": [[x.alpha, x.beta, x.region, x.table_value, x.minmax_value]
                        for x in discrepancies],
        },
    }
    _emit(_json(summary), config.out)
    return (EXIT_OK if failures == 0 else EXIT_FAIL), summary


def cmd_slope(alpha: float, beta: float, config: SweepConfig | None = None) -> tuple[int, dict]:
    config = config or SweepConfig()
    result = verify_point(alpha, beta, config.rho_list, config.tol, config.optimizer())
    report = result.to_dict()
    _emit(_json(report), config.out)
    return (EXIT_OK if result.passed else EXIT_FAIL), report


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser, grid: bool = True) -> None:
    if grid:
        for name in ("alpha", "beta"):
            for k in ("min", "max", "step"):
                p.add_argument(f"--{name}-{k}", dest=f"{name}_{k}", default=None)
        p.add_argument("--beta-list", dest="beta_list", default=None,
                       help="comma-separated beta values (overrides the beta range)")
    p.add_argument("--rho-list", dest="rho_list", default=None,
                   help="comma-separated SNRs, e.g. 2^24,2^30,...")
    p.add_argument("--tol", default=None)
    p.add_argument("--grid-step", dest="grid_step", default=None, help="optimizer grid step")
    p.add_argument("--out", default=None, help="output path (default: standard output)")
    p.add_argument("--format", default=None, help="csv or json")
    p.add_argument("--threads", default=None)
    p.add_argument("--config", default=None, help="key=value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icscr",
        description="GDOF of the symmetric interference channel with a signal cognitive relay.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("regions", help="region map data (CSV)"))
    _add_common(sub.add_parser("curve", help="GDOF vs alpha for a list of beta values"))

    p = sub.add_parser("rates", help="schemes and bounds for one channel (JSON)")
    p.add_argument("h_d", type=float)
    p.add_argument("h_c", type=float)
    p.add_argument("h_r", type=float)
    p.add_argument("P", type=float, nargs="?", default=1.0)
    _add_common(p, grid=False)

    _add_common(sub.add_parser("verify", help="run the invariant suite (JSON)"))

    p = sub.add_parser("slope", help="slope estimate at one point (JSON)")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    _add_common(p, grid=False)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = vars(args)
    try:
        file_values = load_config_file(args.config) if args.config else {}
        config = build_config(flags, file_values)
        if args.command == "regions":
            cmd_regions(config)
            return EXIT_OK
        if args.command == "curve":
            given = {**file_values, **{k: v for k, v in flags.items() if v is not None}}
            if not any(k.startswith("beta_") for k in given):
                # A curve plot wants a few beta values, not a dense range.
                config = build_config({**flags, "beta_list": CURVE_BETAS}, file_values)
            cmd_curve(config)
            return EXIT_OK
        if args.command == "rates":
            try:
                params = ChannelParams(args.h_d, args.h_c, args.h_r, args.P)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            cmd_rates(params, config)
            return EXIT_OK
        if args.command == "verify":
            code, _ = cmd_verify(config)
            return code
        if args.command == "slope":
            if args.alpha < 0 or args.beta < 0:
                raise ConfigError("alpha and beta must be nonnegative")
            code, _ = cmd_slope(args.alpha, args.beta, config)
            return code
    except ConfigError as exc:
        print(f"icscr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"unknown command {args.command!r}")
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
