from fractions import Fraction

import numpy as np
import pytest

from icscr.gdof import (
    Region,
    classify,
    classify_grid,
    consistency_report,
    gdof_grid,
    gdof_upper_bounds,
    gdof_value,
    region_conditions,
    theorem1_minmax,
)

from oracles import w_curve


def table_oracle(alpha, beta):
    """Exact rational evaluation of the region table, first match wins."""
    a, b = Fraction(alpha), Fraction(beta)
    rules = [
        (a >= 2 and b <= 1, 1),
        (a <= b <= 2 and a <= 1, 1),
        (max(1, 2 * b) <= a <= 2, a / 2),
        (a >= max(1, b) and b >= min(a / 2, 1), b),
        (a <= b <= 2 * a and a >= 1, a),
        ((b + 1) / 2 <= a <= Fraction(2, 3), a),
        (b >= max(2, 2 * a), b / 2),
        (min(2 * a - 1, a / 2) <= b <= a and a <= 1, 1 + b - a),
        (max(Fraction(2, 3), 2 * b) <= a <= 1, 1 - a / 2),
    ]
    for k, (cond, value) in enumerate(rules, 1):
        if cond:
            return k, float(value)
    raise AssertionError("uncovered")


@pytest.mark.parametrize("alpha, expected", [
    (0, 1), (0.25, 0.75), (0.5, 0.5), (2 / 3, 2 / 3), (0.8, 0.6),
    (1, 0.5), (1.5, 0.75), (2, 1), (3, 1),
])
def test_w_curve_anchor_points(alpha, expected):
    assert abs(gdof_value(alpha, 0) - expected) <= 1e-12


def test_w_curve_dense():
    for alpha in np.linspace(0, 3, 601):
        assert gdof_value(alpha, 0) == pytest.approx(w_curve(alpha), abs=1e-12)


@pytest.mark.parametrize("point, region", [
    ((3, 0.5), 1), ((0.8, 0.5), 8), ((2, 1), 1), ((0, 0), 2),
    ((0.5, 1.5), 2), ((1.5, 0.25), 3), ((1.5, 1), 4), ((1.2, 1.5), 5),
    ((0.6, 0.1), 6), ((1, 3), 7), ((0.9, 0.1), 9),
])
def test_classify_examples(point, region):
    assert classify(*point) == Region(region)
    assert int(classify(*point)) == region


@pytest.mark.parametrize("point, value", [
    ((3, 0.5), 1), ((1.5, 0.25), 0.75), ((0.8, 0.5), 0.7), ((0, 0), 1),
    ((0.9, 0.1), 0.55),
])
def test_gdof_value_examples(point, value):
    assert gdof_value(*point) == pytest.approx(value, abs=1e-12)


def test_against_rational_oracle_on_grid():
    # Grid of exact multiples of 1/20 so that Fraction(float) is the intended value
    # on dyadic points; non-dyadic points compare with tolerance instead.
    for i in range(0, 61, 3):
        for j in range(0, 61, 3):
            a, b = i / 20, j / 20
            label, value = table_oracle(Fraction(i, 20), Fraction(j, 20))
            assert classify(a, b).id == label, (a, b)
            assert gdof_value(a, b) == pytest.approx(value, abs=1e-12)


def test_grid_api_matches_scalar():
    a = np.array([0.0, 0.8, 1.5, 3.0])
    b = np.array([0.0, 0.5, 0.25, 0.5])
    assert list(classify_grid(a, b)) == [classify(x, y).id for x, y in zip(a, b)]
    assert np.allclose(gdof_grid(a, b), [gdof_value(x, y) for x, y in zip(a, b)])
    assert region_conditions(a, b).shape == (9, 4)


def test_region_validation():
    with pytest.raises(ValueError):
        Region(0)
    with pytest.raises(ValueError):
        gdof_value(-0.1, 0)


def test_upper_bound_examples():
    s = gdof_upper_bounds(1.5, 0.25)
    assert s.terms() == {"single_user": 1, "mac_strong": 0.75}
    assert s.minimum == 0.75
    s = gdof_upper_bounds(1, 3)
    assert s.terms() == {"single_user": 3, "mac_mixed": 1.5}
    s = gdof_upper_bounds(0.5, 0)
    assert s.terms() == {"single_user": 1, "z_bound": 1, "weak_interference": 1}


def test_minmax_examples():
    assert theorem1_minmax(3, 0.5) == 1
    assert theorem1_minmax(0.8, 0.5) == pytest.approx(0.8)
    assert theorem1_minmax(0.9, 0) == pytest.approx(0.9)
    assert gdof_value(0.9, 0) == pytest.approx(0.55)


def test_consistency_report_points():
    assert consistency_report([(3, 0.5)]) == []
    (rec,) = consistency_report([(0.9, 0)])
    assert (rec.table_value, rec.minmax_value) == pytest.approx((0.55, 0.9))
    assert rec.region == 9 and rec.gap == pytest.approx(0.35)
    (rec,) = consistency_report([(0.8, 0.5)])
    assert (rec.table_value, rec.minmax_value) == pytest.approx((0.7, 0.8))


def test_consistency_report_grid_and_empty():
    ax = np.round(np.linspace(0, 3, 31), 12)
    recs = consistency_report(alpha=ax, beta=ax)
    assert recs and all(r.alpha <= 1 for r in recs)
    with pytest.raises(ValueError):
        consistency_report(alpha=[], beta=[0.0])
