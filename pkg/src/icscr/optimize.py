"""Deterministic grid search with projected pattern-search refinement.

The converse bounds maximize smooth but nonconvex expressions over source
amplitudes ``a_j`` in ``[-1, 1]`` and relay weights ``(b1, b2)`` in the unit
disk. :func:`maximize` does this in two stages:

1. a uniform grid (box coordinates on ``linspace(-1, 1)``, the disk on a
   polar grid whose ring spacing and arc spacing both equal ``grid_step``);
2. a compass search from the best ``multistart_count`` grid cells and from
   every seed point. Trial points are projected back onto the feasible set,
   and the step is halved whenever no neighbour improves.

Objectives are vectorized and take one array per coordinate. During the grid
stage those arrays are shaped for broadcasting (one axis per box coordinate,
one trailing axis for the disk points). Per-coordinate intermediate terms
therefore stay small, and only the final combination is full size.
Infeasible points are reported by returning ``-inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channel import RelayCoefficients

__all__ = [
    "OptimizerSettings",
    "Domain",
    "Optimum",
    "EmptyFeasibleSetError",
    "maximize",
    "disk_grid",
]

# Cap on the number of objective values materialized per grid chunk.
_CHUNK_ELEMENTS = 1 << 21
_MIN_STEP = 1e-9


class EmptyFeasibleSetError(ValueError):
    """No grid point or seed produced a finite objective value."""


@dataclass(frozen=True)
class OptimizerSettings:
    """Knobs for :func:`maximize`.

    ``seed_points`` are coefficient sets that every bound evaluation injects
    as extra starting points. The optimizer then never reports less than the
    objective at those points.
    """

    grid_step: float = 0.05
    refinement_iterations: int = 200
    multistart_count: int = 16
    seed_points: tuple[RelayCoefficients, ...] = ()
    value_tol: float = 1e-6

    def __post_init__(self):
        if not (0 < self.grid_step <= 0.05):
            raise ValueError(f"grid_step must lie in (0, 0.05], got {self.grid_step!r}")
        if self.refinement_iterations < 0:
            raise ValueError("refinement_iterations must be nonnegative")
        if self.multistart_count < 1:
            raise ValueError("multistart_count must be at least 1")
        object.__setattr__(self, "seed_points", tuple(self.seed_points))

    def with_seeds(self, seeds: Sequence[RelayCoefficients]) -> "OptimizerSettings":
        merged = list(self.seed_points)
        for s in seeds:
            if s is not None and s not in merged:
                merged.append(s)
        return OptimizerSettings(
            grid_step=self.grid_step,
            refinement_iterations=self.refinement_iterations,
            multistart_count=self.multistart_count,
            seed_points=tuple(merged),
            value_tol=self.value_tol,
        )


@dataclass(frozen=True)
class Domain:
    """``box`` coordinates in ``[-1, 1]``, optionally followed by a disk pair."""

    box: int = 0
    disk: bool = False

    @property
    def dim(self) -> int:
        return self.box + (2 if self.disk else 0)

    def project(self, x: np.ndarray) -> np.ndarray:
        x = np.array(x, dtype=float, copy=True)
        if self.box:
            np.clip(x[..., : self.box], -1.0, 1.0, out=x[..., : self.box])
        if self.disk:
            pair = x[..., self.box :]
            norm = np.hypot(pair[..., 0], pair[..., 1])
            scale = np.where(norm > 1.0, 1.0 / np.where(norm > 0, norm, 1.0), 1.0)
            x[..., self.box :] = pair * scale[..., np.newaxis]
        return x


@dataclass(frozen=True)
class Optimum:
    value: float
    x: tuple[float, ...]
    evaluations: int = field(default=0, compare=False)


def disk_grid(step: float) -> np.ndarray:
    """Polar grid over the closed unit disk, shape ``(n, 2)``."""
    n_rings = max(1, math.ceil(1.0 / step - 1e-9))
    points = [np.zeros((1, 2))]
    for k in range(1, n_rings + 1):
        r = k / n_rings
        m = max(4, math.ceil(2 * math.pi * r / step - 1e-9))
        theta = 2 * math.pi * np.arange(m) / m
        points.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
    return np.concatenate(points)


def _box_axis(step: float) -> np.ndarray:
    n = int(round(2.0 / step)) + 1
    return np.linspace(-1.0, 1.0, max(n, 2))


def _clean(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return np.where(np.isnan(v), -np.inf, v)


def _evaluate_columns(objective, x: np.ndarray) -> np.ndarray:
    cols = [x[:, k] for k in range(x.shape[1])]
    return np.broadcast_to(_clean(objective(*cols)), (x.shape[0],))


def _top_indices(vals: np.ndarray, keep: int) -> np.ndarray:
    """Indices of the ``keep`` largest values; ties resolved by index order."""
    if vals.size <= keep:
        return np.argsort(-vals, kind="stable")
    thr = np.partition(vals, vals.size - keep)[vals.size - keep]
    above = np.flatnonzero(vals > thr)
    at = np.flatnonzero(vals == thr)[: keep - len(above)]
    idx = np.concatenate([above, at])
    return idx[np.argsort(-vals[idx], kind="stable")]


def _grid_candidates(objective, domain: Domain, step: float, keep: int):
    """Best ``keep`` grid points as ``(values, points)``, plus the eval count."""
    axis = _box_axis(step)
    disk = disk_grid(step) if domain.disk else None
    n_disk = len(disk) if domain.disk else 1
    shape = (len(axis),) * domain.box + (n_disk,)
    total = int(np.prod(shape))
    # Chunk along the first box axis so memory stays bounded.
    per_first = total // shape[0] if domain.box else total
    rows = max(1, _CHUNK_ELEMENTS // max(per_first, 1)) if domain.box else 1
    first_len = shape[0] if domain.box else 1

    best_vals: list[np.ndarray] = []
    best_pts: list[np.ndarray] = []
    for start in range(0, first_len, rows):
        stop = min(first_len, start + rows)
        cols = []
        for k in range(domain.box):
            values = axis[start:stop] if k == 0 else axis
            shp = [1] * (domain.box + 1)
            shp[k] = len(values)
            cols.append(values.reshape(shp))
        if domain.disk:
            shp = [1] * domain.box + [n_disk]
            cols.append(disk[:, 0].reshape(shp))
            cols.append(disk[:, 1].reshape(shp))
        chunk_shape = ((stop - start),) + shape[1:] if domain.box else shape
        vals = np.broadcast_to(_clean(objective(*cols)), chunk_shape).ravel()
        idx = _top_indices(vals, keep)
        take = len(idx)
        multi = np.unravel_index(idx, chunk_shape)
        pts = np.empty((take, domain.dim))
        for k in range(domain.box):
            offset = start if k == 0 else 0
            pts[:, k] = axis[multi[k] + offset]
        if domain.disk:
            pts[:, domain.box :] = disk[multi[domain.box]]
        best_vals.append(vals[idx])
        best_pts.append(pts)
    vals = np.concatenate(best_vals)
    pts = np.concatenate(best_pts)
    order = np.argsort(-vals, kind="stable")[:keep]
    return vals[order], pts[order], total


def _pattern_search(objective, domain: Domain, x0: np.ndarray, f0: np.ndarray,
                    step: float, iterations: int, value_tol: float):
    dim = domain.dim
    dirs = np.concatenate([np.eye(dim), -np.eye(dim)])
    x = x0.copy()
    f = f0.copy()
    h = np.full(len(x), step)
    evals = 0
    for _ in range(iterations):
        active = (h > _MIN_STEP) & np.isfinite(f)
        if not active.any():
            break
        xa, fa, ha = x[active], f[active], h[active]
        trial = domain.project(xa[:, np.newaxis, :] + ha[:, np.newaxis, np.newaxis] * dirs)
        tv = _evaluate_columns(objective, trial.reshape(-1, dim)).reshape(len(xa), len(dirs))
        evals += tv.size
        j = np.argmax(tv, axis=1)
        best = tv[np.arange(len(xa)), j]
        better = best > fa
        xa = np.where(better[:, np.newaxis], trial[np.arange(len(xa)), j], xa)
        # Tiny gains near a flat optimum should not keep the step large.
        shrink = ~better | (best - fa < value_tol * 1e-3 * np.maximum(1.0, np.abs(fa)))
        fa = np.where(better, best, fa)
        ha = np.where(shrink, ha / 2, np.minimum(ha * 2, step))
        x[active], f[active], h[active] = xa, fa, ha
    return x, f, evals


def maximize(
    objective: Callable[..., np.ndarray],
    domain: Domain,
    settings: OptimizerSettings | None = None,
    seeds: Sequence[Sequence[float]] = (),
) -> Optimum:
    """Maximize ``objective`` over ``domain``.

    Parameters
    ----------
    objective : callable
        ``objective(*coords)`` with one broadcastable array per coordinate;
        returns the objective values, ``-inf`` where infeasible.
    domain : Domain
        Box coordinates first, then the optional disk pair.
    settings : OptimizerSettings, optional
        Grid step, number of multistarts and refinement budget.
    seeds : sequence of points
        Extra starting points, projected onto the domain before use.

    Returns
    -------
    Optimum
        The best value found and its argmax. The value is never below the
        objective at any grid point or (projected) seed. Exact ties go to the
        lexicographically smallest argmax.
    """
    settings = settings or OptimizerSettings()
    dim = domain.dim
    if dim == 0:
        value = float(_clean(objective()))
        if not np.isfinite(value):
            raise EmptyFeasibleSetError("objective is not finite")
        return Optimum(value, (), 1)

    grid_vals, grid_pts, evals = _grid_candidates(
        objective, domain, settings.grid_step, settings.multistart_count
    )
    starts = [grid_pts]
    start_vals = [grid_vals]
    if len(seeds):
        seed_pts = domain.project(np.asarray(seeds, dtype=float).reshape(-1, dim))
        starts.append(seed_pts)
        start_vals.append(_evaluate_columns(objective, seed_pts))
        evals += len(seed_pts)
    x0 = np.concatenate(starts)
    f0 = np.concatenate(start_vals)
    if not np.isfinite(f0).any():
        raise EmptyFeasibleSetError("no feasible point with a finite objective value")

    x, f, more = _pattern_search(
        objective, domain, x0, f0, settings.grid_step,
        settings.refinement_iterations, settings.value_tol,
    )
    evals += more
    x = np.concatenate([x, x0])
    f = np.concatenate([f, f0])
    top = f.max()
    tied = np.flatnonzero(f == top)
    winners = x[tied]
    pick = np.lexsort(winners.T[::-1])[0]
    return Optimum(float(top), tuple(float(v) for v in winners[pick]), evals)
