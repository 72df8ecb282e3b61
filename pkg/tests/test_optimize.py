import math

import numpy as np
import pytest

from icscr.channel import RelayCoefficients
from icscr.optimize import (
    Domain,
    EmptyFeasibleSetError,
    OptimizerSettings,
    disk_grid,
    maximize,
)


def test_constant_objective():
    best = maximize(lambda b1, b2: np.zeros(np.broadcast(b1, b2).shape), Domain(disk=True))
    assert best.value == 0
    assert best.x[0] ** 2 + best.x[1] ** 2 <= 1


def test_linear_over_disk():
    best = maximize(lambda b1, b2: b2 + 0 * b1, Domain(disk=True))
    assert best.value == pytest.approx(1, abs=1e-9)
    assert best.x == pytest.approx((0, 1), abs=1e-6)


def test_interior_maximum_box_and_disk():
    def f(a1, a2, b1, b2):
        return -((a1 - 0.3) ** 2) - (a2 + 0.7) ** 2 - (b1 - 0.2) ** 2 - (b2 + 0.1) ** 2

    best = maximize(f, Domain(box=2, disk=True))
    assert best.value == pytest.approx(0, abs=1e-9)
    assert best.x == pytest.approx((0.3, -0.7, 0.2, -0.1), abs=1e-5)


def test_capacity_of_q1():
    # C(q1) for (h_d, h_c, h_r, P) = (1, 4, 2, 1); oracle value from tests/oracles.py.
    lever2 = (2 * (1 - 1 / 4)) ** 2

    def f(b1, b2):
        return np.log2(1 + b1**2 * lever2 + (4 + 2 * b2) ** 2)

    best = maximize(f, Domain(disk=True))
    assert best.value == pytest.approx(5.20945336562895, abs=1e-7)


def test_seeds_are_never_lost():
    # A narrow spike between grid points; only the seed sees it.
    spike = (0.01234, 0.00567)

    def f(b1, b2):
        r2 = (b1 - spike[0]) ** 2 + (b2 - spike[1]) ** 2
        return np.where(r2 < 1e-12, 10.0, 0.0)

    best = maximize(f, Domain(disk=True), seeds=[spike])
    assert best.value == 10.0


def test_infeasible_everywhere():
    with pytest.raises(EmptyFeasibleSetError):
        maximize(lambda a: np.full(np.shape(a), -np.inf), Domain(box=1))


def test_nan_treated_as_infeasible():
    best = maximize(lambda a: np.where(a > 0.5, np.nan, a), Domain(box=1))
    assert best.value == pytest.approx(0.5, abs=1e-9)


def test_tie_break_is_lexicographic():
    best = maximize(lambda a: a**2, Domain(box=1))
    assert best.x == (-1.0,)


def test_deterministic():
    def f(a1, b1, b2):
        return np.sin(5 * a1) * np.cos(3 * b1) + b2

    assert maximize(f, Domain(box=1, disk=True)) == maximize(f, Domain(box=1, disk=True))


def test_disk_grid_covers_disk():
    pts = disk_grid(0.05)
    r = np.hypot(pts[:, 0], pts[:, 1])
    assert r.max() <= 1 + 1e-12
    # Every point of a fine probe set has a grid point within one step.
    probe = np.random.default_rng(0).uniform(-1, 1, (500, 2))
    probe = probe[np.hypot(*probe.T) <= 1]
    d = np.min(np.hypot(probe[:, None, 0] - pts[None, :, 0], probe[:, None, 1] - pts[None, :, 1]), axis=1)
    assert d.max() <= 0.05


def test_project():
    dom = Domain(box=1, disk=True)
    x = dom.project(np.array([2.0, 3.0, 4.0]))
    assert x[0] == 1.0 and math.hypot(x[1], x[2]) == pytest.approx(1.0)


def test_settings_validation():
    with pytest.raises(ValueError):
        OptimizerSettings(grid_step=0.1)
    with pytest.raises(ValueError):
        OptimizerSettings(multistart_count=0)
    with pytest.raises(ValueError):
        OptimizerSettings(refinement_iterations=-1)
    s = OptimizerSettings().with_seeds([RelayCoefficients(1, 1, 0, 0), None])
    assert s.seed_points == (RelayCoefficients(1, 1, 0, 0),)
    assert s.with_seeds(s.seed_points).seed_points == s.seed_points
