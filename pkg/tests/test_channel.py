import math

import pytest

from icscr.channel import (
    ChannelParams,
    DivisionGuardError,
    GdofPoint,
    RelayCoefficients,
    effective_gains,
    exponents_from_gains,
    gains_from_exponents,
)

H = 1 / math.sqrt(2)


@pytest.mark.parametrize(
    "alpha, beta, rho, expected",
    [
        (1, 1, 100, (10, 10, 10)),
        (2, 0, 100, (10, 100, 1)),
        (0.5, 1.5, 1e4, (100, 10, 1000)),
    ],
)
def test_gains_from_exponents(alpha, beta, rho, expected):
    p = gains_from_exponents(GdofPoint(alpha, beta, rho))
    assert p.P == 1.0
    assert (p.h_d, p.h_c, p.h_r) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize(
    "gains, rho, expected",
    [
        ((10, 10, 10), 100, (1, 1)),
        ((10, 100, 1), 100, (2, 0)),
        ((100, 10, 1000), 1e4, (0.5, 1.5)),
    ],
)
def test_exponents_from_gains(gains, rho, expected):
    point = exponents_from_gains(ChannelParams(*gains, P=1.0), rho)
    assert (point.alpha, point.beta) == pytest.approx(expected, abs=1e-12)


def test_exponents_roundtrip():
    point = GdofPoint(0.73, 1.21, 2.0**30)
    back = exponents_from_gains(gains_from_exponents(point), point.rho)
    assert back.alpha == pytest.approx(point.alpha, abs=1e-12)
    assert back.beta == pytest.approx(point.beta, abs=1e-12)


def test_exponents_reject_bad_input():
    with pytest.raises(ValueError):
        exponents_from_gains(ChannelParams(10, 0, 1), 100)
    with pytest.raises(ValueError):
        exponents_from_gains(ChannelParams(10, 10, 10), 50)  # wrong anchor
    with pytest.raises(ValueError):
        exponents_from_gains(ChannelParams(1, 1, 1), 1.0)


@pytest.mark.parametrize("kwargs", [
    dict(h_d=-1, h_c=1, h_r=1),
    dict(h_d=1, h_c=math.nan, h_r=1),
    dict(h_d=1, h_c=1, h_r=1, P=0),
    dict(h_d=1, h_c=1, h_r=1, P=math.inf),
])
def test_channel_validation(kwargs):
    with pytest.raises(ValueError):
        ChannelParams(**kwargs)


def test_gdof_point_validation():
    with pytest.raises(ValueError):
        GdofPoint(-0.1, 0, 10)
    with pytest.raises(ValueError):
        GdofPoint(1, 1, 1.0)


def test_relay_power_constraint():
    RelayCoefficients(1, -1, H, H)  # exactly on the boundary
    with pytest.raises(ValueError):
        RelayCoefficients(1, 1, 0.8, 0.8)
    with pytest.raises(ValueError):
        RelayCoefficients(1.01, 1, 0, 0)
    assert RelayCoefficients(0.5, 0.5, 0.6, 0.8).relay_power_fraction == pytest.approx(1.0)


def test_effective_gains_full_cooperation():
    g = effective_gains(ChannelParams(1, 2, 3), RelayCoefficients(H, H, H, H))
    assert (g.g11, g.g12) == pytest.approx((4, 5))
    assert (g.g21, g.g22) == pytest.approx((5, 4))


def test_effective_gains_silent_relay():
    p = ChannelParams(1.3, 0.4, 7.0)
    g = effective_gains(p, RelayCoefficients(1, 1, 0, 0))
    assert (g.g11, g.g12, g.g21, g.g22) == (1.3, 0.4, 0.4, 1.3)


def test_effective_gains_zero_forcing():
    a = -H * 2 / 3
    g = effective_gains(ChannelParams(1, 3, 2), RelayCoefficients(a, a, H, H))
    assert g.g12 == pytest.approx(0, abs=1e-12)
    assert g.g21 == pytest.approx(0, abs=1e-12)


def test_effective_gains_division_guard():
    with pytest.raises(DivisionGuardError):
        effective_gains(ChannelParams(1, 1, 1), RelayCoefficients(0, 1, 0.5, 0.5))
    # The guard is both a ZeroDivisionError and a ValueError.
    assert issubclass(DivisionGuardError, ZeroDivisionError)
    assert issubclass(DivisionGuardError, ValueError)
