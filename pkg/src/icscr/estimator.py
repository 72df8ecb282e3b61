"""Numerical GDOF extraction by regression against ``log2(rho)``.

For a fixed exponent pair the channel is rebuilt at several SNRs. At each
SNR the best symmetric achievable rate and half of the smallest sum-rate
bound are computed. Their least-squares slopes against ``log2(rho)`` estimate
the achievable and converse GDOF, and are compared with the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import GdofPoint, gains_from_exponents
from .bounds import sum_rate_upper_bound
from .gdof import gdof_value
from .optimize import OptimizerSettings
from .schemes import all_schemes, best_achievable

__all__ = [
    "DEFAULT_RHO_LIST",
    "SlopeReport",
    "VerifyResult",
    "estimate_gdof",
    "verify_point",
]

DEFAULT_RHO_LIST = tuple(float(r) for r in np.geomspace(2.0**24, 2.0**48, 8))


@dataclass(frozen=True)
class SlopeReport:
    """Regression result for one ``(alpha, beta)`` point.

    ``residual`` is the largest absolute residual of the achievable-rate fit.
    """

    alpha: float
    beta: float
    rho_list: tuple[float, ...]
    achieved_rates: tuple[float, ...]
    bound_rates: tuple[float, ...]
    achieved_slope: float
    bound_slope: float
    closed_form: float
    residual: float
    schemes: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "rho_list": list(self.rho_list),
            "achieved_rates": list(self.achieved_rates),
            "bound_rates": list(self.bound_rates),
            "achieved_slope": self.achieved_slope,
            "bound_slope": self.bound_slope,
            "closed_form": self.closed_form,
            "residual": self.residual,
            "schemes": list(self.schemes),
        }


@dataclass(frozen=True)
class VerifyResult:
    report: SlopeReport
    tol: float
    passed: bool
    error: float

    def to_dict(self) -> dict:
        out = self.report.to_dict()
        out.update(tol=self.tol, passed=self.passed, error=self.error)
        return out


def _check_rho_list(rho_list) -> tuple[float, ...]:
    rhos = tuple(float(r) for r in rho_list)
    if len(rhos) < 4:
        raise ValueError("rho_list needs at least 4 values")
    if any(r <= 1.0 for r in rhos):
        raise ValueError("every rho must exceed 1")
    if any(b <= a for a, b in zip(rhos, rhos[1:])):
        raise ValueError("rho_list must be strictly increasing")
    return rhos


def _ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and the largest absolute residual."""
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = y - design @ coef
    return float(coef[0]), float(np.max(np.abs(residual)))


def estimate_gdof(alpha: float, beta: float, rho_list=None,
                  opt: OptimizerSettings | None = None) -> SlopeReport:
    """Estimate achievable and converse GDOF slopes at ``(alpha, beta)``.

    Parameters
    ----------
    alpha, beta : float
        Cross-link and relay-link exponents, both nonnegative.
    rho_list : sequence of float, optional
        Strictly increasing SNRs (> 1), at least four of them. Defaults to
        eight geometric points from ``2**24`` to ``2**48``.
    opt : OptimizerSettings, optional
        Optimizer settings shared by the HK search and the bounds.

    Returns
    -------
    SlopeReport
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    rhos = _check_rho_list(DEFAULT_RHO_LIST if rho_list is None else rho_list)
    opt = opt or OptimizerSettings()

    achieved, bound, names = [], [], []
    warm = ()
    for rho in rhos:
        params = gains_from_exponents(GdofPoint(alpha, beta, rho))
        results = all_schemes(params, opt)
        best = best_achievable(params, results=results)
        seeds = [r.coeffs for r in results if r.applicable and r.coeffs is not None]
        report = sum_rate_upper_bound(params, opt.with_seeds(seeds + list(warm)))
        # The next SNR starts from this one's maximizers.
        warm = tuple(report.argmax.values())
        achieved.append(best.sym_rate)
        bound.append(report.sum_rate_min / 2)
        names.append(best.scheme.name)

    x = np.log2(rhos)
    achieved_slope, residual = _ols(x, np.asarray(achieved))
    bound_slope, _ = _ols(x, np.asarray(bound))
    return SlopeReport(
        alpha=float(alpha),
        beta=float(beta),
        rho_list=rhos,
        achieved_rates=tuple(achieved),
        bound_rates=tuple(bound),
        achieved_slope=achieved_slope,
        bound_slope=bound_slope,
        closed_form=gdof_value(alpha, beta),
        residual=residual,
        schemes=tuple(names),
    )


def verify_point(alpha: float, beta: float, rho_list=None, tol: float = 0.05,
                 opt: OptimizerSettings | None = None) -> VerifyResult:
    """Sandwich check: the achieved slope matches the closed form and does
    not exceed the bound slope, both within ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    report = estimate_gdof(alpha, beta, rho_list, opt)
    error = abs(report.achieved_slope - report.closed_form)
    passed = error <= tol and report.achieved_slope <= report.bound_slope + tol
    return VerifyResult(report, float(tol), bool(passed), float(error))
