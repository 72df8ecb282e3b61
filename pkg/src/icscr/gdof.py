"""Closed-form generalized degrees of freedom (GDOF).

The (alpha, beta) quadrant splits into nine regions, each with an affine
GDOF value. :func:`region_conditions` evaluates all nine membership tests
at once on arrays, and the scalar API (:func:`classify`,
:func:`gdof_value`) sits on top of it.

:func:`theorem1_minmax` is the two-branch min-max characterization stated
alongside the table. It is kept for auditing only: for some ``alpha < 1``
points it does not agree with the table (for example ``(0.9, 0)`` gives 0.9
against the table's 0.55), and :func:`consistency_report` lists where.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

__all__ = [
    "REGION_IDS",
    "Region",
    "GdofBoundSet",
    "Discrepancy",
    "region_conditions",
    "region_values",
    "classify",
    "classify_grid",
    "gdof_value",
    "gdof_grid",
    "gdof_upper_bounds",
    "theorem1_minmax",
    "theorem1_minmax_grid",
    "consistency_report",
]

REGION_IDS = tuple(range(1, 10))

# Closed comparisons get this much slack so that grid points sitting exactly
# on a boundary are not lost to rounding (2*0.55 - 1 != 0.1 in binary).
BOUNDARY_EPS = 1e-12
DISCREPANCY_TOL = 1e-9


@dataclass(frozen=True)
class Region:
    id: int

    def __post_init__(self):
        if self.id not in REGION_IDS:
            raise ValueError(f"region id must be in 1..9, got {self.id!r}")

    def __int__(self):
        return self.id


def _as_arrays(alpha, beta):
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("alpha and beta must be nonnegative")
    return np.broadcast_arrays(a, b)


def region_conditions(alpha, beta, eps: float = BOUNDARY_EPS) -> np.ndarray:
    """Membership of every point in each of the nine regions.

    Returns a boolean array of shape ``(9,) + broadcast_shape``; row ``k``
    is region ``k + 1``.
    """
    a, b = _as_arrays(alpha, beta)

    def le(x, y):
        return x <= y + eps

    conds = [
        le(2.0, a) & le(b, 1.0),
        le(a, b) & le(b, 2.0) & le(a, 1.0),
        le(np.maximum(1.0, 2.0 * b), a) & le(a, 2.0),
        le(np.maximum(1.0, b), a) & le(np.minimum(a / 2.0, 1.0), b),
        le(a, b) & le(b, 2.0 * a) & le(1.0, a),
        le((b + 1.0) / 2.0, a) & le(a, 2.0 / 3.0),
        le(np.maximum(2.0, 2.0 * a), b),
        le(np.minimum(2.0 * a - 1.0, a / 2.0), b) & le(b, a) & le(a, 1.0),
        le(np.maximum(2.0 / 3.0, 2.0 * b), a) & le(a, 1.0),
    ]
    return np.stack(conds)


def region_values(alpha, beta) -> np.ndarray:
    """The nine per-region value formulas, evaluated everywhere.

    Shape ``(9,) + broadcast_shape``. Only meaningful where the matching
    row of :func:`region_conditions` holds.
    """
    a, b = _as_arrays(alpha, beta)
    one = np.ones_like(a)
    return np.stack([
        one,
        one,
        a / 2.0,
        b,
        a,
        a,
        b / 2.0,
        1.0 + b - a,
        1.0 - a / 2.0,
    ])


def classify_grid(alpha, beta) -> np.ndarray:
    """Lowest-numbered matching region for every point; 0 where none holds."""
    conds = region_conditions(alpha, beta)
    first = np.argmax(conds, axis=0) + 1
    return np.where(conds.any(axis=0), first, 0)


def gdof_grid(alpha, beta) -> np.ndarray:
    """Vectorized :func:`gdof_value`; NaN where no region matches."""
    conds = region_conditions(alpha, beta)
    values = region_values(alpha, beta)
    idx = np.argmax(conds, axis=0)
    picked = np.take_along_axis(values, idx[np.newaxis], axis=0)[0]
    return np.where(conds.any(axis=0), picked, np.nan)


def classify(alpha: float, beta: float) -> Region:
    """Region label of ``(alpha, beta)``; ties go to the lowest index."""
    label = int(classify_grid(alpha, beta))
    if label == 0:
        # Cannot happen for valid input: the nine regions cover the quadrant.
        raise RuntimeError(f"no region matches ({alpha!r}, {beta!r})")
    return Region(label)


def gdof_value(alpha: float, beta: float) -> float:
    """Per-user GDOF ``d(alpha, beta)`` from the region table."""
    region = classify(alpha, beta)
    return float(region_values(alpha, beta)[region.id - 1])


@dataclass(frozen=True)
class GdofBoundSet:
    """Per-user exponent-form upper bounds; ``None`` marks an inapplicable term.

    The sum-rate bounds are stored halved so that every field compares
    directly against ``d``.
    """

    single_user: float
    mac_strong: Optional[float] = None
    mac_mixed: Optional[float] = None
    z_bound: Optional[float] = None
    weak_interference: Optional[float] = None

    def terms(self) -> dict[str, float]:
        out = {"single_user": self.single_user}
        for name in ("mac_strong", "mac_mixed", "z_bound", "weak_interference"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    @property
    def minimum(self) -> float:
        return min(self.terms().values())


def gdof_upper_bounds(alpha: float, beta: float) -> GdofBoundSet:
    """Evaluate the exponent-form converse terms literally.

    The two ``alpha < 1`` terms both contain the constant 1 and so never
    undercut the single-user term; they are reported unchanged anyway.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    a, b = float(alpha), float(beta)
    # The finite-SNR case conditions are strict; in exponent form their
    # closures are used, which is harmless because d is continuous.
    mac_strong = max(b, a / 2) if a >= max(1.0, b) else None
    mac_mixed = max(b / 2, a) if b >= a >= 1.0 else None
    if a < 1.0:
        z = max(1 - a / 2, b, 1 + b - a, 1.0)
        weak = max(1 + b - a, 1.0)
    else:
        z = weak = None
    return GdofBoundSet(
        single_user=max(1.0, b),
        mac_strong=mac_strong,
        mac_mixed=mac_mixed,
        z_bound=z,
        weak_interference=weak,
    )


def theorem1_minmax_grid(alpha, beta) -> np.ndarray:
    a, b = _as_arrays(alpha, beta)
    strong = np.minimum.reduce([
        np.maximum(1.0, b),
        np.maximum(b, a / 2),
        np.maximum(a, b / 2),
    ])
    weak = np.minimum(
        np.maximum(1 + b - a, a),
        np.maximum.reduce([1 - a / 2, b, 1 + b - a, np.ones_like(a)]),
    )
    return np.where(a > 1.0, strong, weak)


def theorem1_minmax(alpha: float, beta: float) -> float:
    """The two-branch min-max characterization, evaluated literally.

    No claim of correctness is attached; see :func:`consistency_report`.
    """
    return float(theorem1_minmax_grid(alpha, beta))


@dataclass(frozen=True)
class Discrepancy:
    alpha: float
    beta: float
    region: int
    table_value: float
    minmax_value: float

    @property
    def gap(self) -> float:
        return self.minmax_value - self.table_value


def consistency_report(
    points: Iterable[tuple[float, float]] | None = None,
    *,
    alpha=None,
    beta=None,
    tol: float = DISCREPANCY_TOL,
) -> list[Discrepancy]:
    """Points where the min-max expression and the region table disagree.

    Either pass an iterable of ``(alpha, beta)`` pairs, or ``alpha`` and
    ``beta`` arrays that are broadcast into a grid (row-major, alpha
    outer). The report keeps the input order.
    """
    if points is not None:
        pairs = np.asarray(list(points), dtype=float).reshape(-1, 2)
        a, b = pairs[:, 0], pairs[:, 1]
    else:
        if alpha is None or beta is None:
            raise ValueError("give either points or both alpha and beta")
        a, b = np.meshgrid(np.asarray(alpha, float), np.asarray(beta, float), indexing="ij")
        a, b = a.ravel(), b.ravel()
    if a.size == 0:
        raise ValueError("grid is empty")
    table = gdof_grid(a, b)
    minmax = theorem1_minmax_grid(a, b)
    labels = classify_grid(a, b)
    bad = np.flatnonzero(np.abs(minmax - table) > tol)
    return [
        Discrepancy(float(a[i]), float(b[i]), int(labels[i]), float(table[i]), float(minmax[i]))
        for i in bad
    ]
