"""Channel parameterization for the symmetric interference channel with a
signal cognitive relay.

Two descriptions of the same channel are used throughout the package:

* gain space, ``ChannelParams(h_d, h_c, h_r, P)``, for finite-SNR rates;
* exponent space, ``GdofPoint(alpha, beta, rho)``, for high-SNR scaling,
  where ``h_d**2 P = rho``, ``h_c**2 P = rho**alpha`` and
  ``h_r**2 P = rho**beta``.

The relay forwards ``(b1/a1) X1 + (b2/a2) X2``, so every receiver sees an
ordinary two-user interference channel whose gains depend on the
``RelayCoefficients``; ``effective_gains`` computes that map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ChannelParams",
    "GdofPoint",
    "RelayCoefficients",
    "EffectiveGains",
    "DivisionGuardError",
    "gains_from_exponents",
    "exponents_from_gains",
    "effective_gains",
]

# Slack for the relay power check; products like (1/sqrt2)**2 * 2 land a few
# ulps above 1.
POWER_SLACK = 1e-15


class DivisionGuardError(ZeroDivisionError, ValueError):
    """Raised when a ratio the model needs is undefined (zero denominator)."""


@dataclass(frozen=True)
class ChannelParams:
    """Direct, cross and relay gains plus the common power budget."""

    h_d: float
    h_c: float
    h_r: float
    P: float = 1.0

    def __post_init__(self):
        for name in ("h_d", "h_c", "h_r"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be a finite nonnegative real, got {value!r}")
        if not math.isfinite(self.P) or self.P <= 0:
            raise ValueError(f"P must be a finite positive real, got {self.P!r}")

    @property
    def snr(self) -> float:
        """``h_d**2 P``, the anchor that plays the role of rho."""
        return self.h_d**2 * self.P


@dataclass(frozen=True)
class GdofPoint:
    alpha: float
    beta: float
    rho: float

    def __post_init__(self):
        if not (self.alpha >= 0 and self.beta >= 0):
            raise ValueError(f"exponents must be nonnegative, got ({self.alpha!r}, {self.beta!r})")
        if not (self.rho > 1) or not math.isfinite(self.rho):
            raise ValueError(f"rho must be a finite real > 1, got {self.rho!r}")


@dataclass(frozen=True)
class RelayCoefficients:
    """Source amplitudes ``a1, a2`` and relay combining weights ``b1, b2``.

    Each source sends with power ``a_j**2 P`` and the relay with
    ``(b1**2 + b2**2) P``, so ``|a_j| <= 1`` and ``b1**2 + b2**2 <= 1``.
    """

    a1: float
    a2: float
    b1: float
    b2: float

    def __post_init__(self):
        for name in ("a1", "a2"):
            value = getattr(self, name)
            if not math.isfinite(value) or value * value > 1.0 + POWER_SLACK:
                raise ValueError(f"{name}**2 must not exceed 1, got {value!r}")
        if not (math.isfinite(self.b1) and math.isfinite(self.b2)):
            raise ValueError("relay weights must be finite")
        if self.b1**2 + self.b2**2 > 1.0 + POWER_SLACK:
            raise ValueError(
                f"relay power constraint violated: b1**2 + b2**2 = {self.b1**2 + self.b2**2!r} > 1"
            )

    @property
    def relay_power_fraction(self) -> float:
        return self.b1**2 + self.b2**2

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a1, self.a2, self.b1, self.b2)


@dataclass(frozen=True)
class EffectiveGains:
    """Gains multiplying ``X1`` and ``X2`` at receivers 1 and 2.

    ``g11`` is ``X1 -> Y1``, ``g12`` is ``X2 -> Y1``, ``g21`` is
    ``X1 -> Y2`` and ``g22`` is ``X2 -> Y2``.
    """

    g11: float
    g12: float
    g21: float
    g22: float


def gains_from_exponents(point: GdofPoint) -> ChannelParams:
    """Channel with ``P = 1`` realizing the exponents of ``point`` exactly."""
    rho = point.rho
    return ChannelParams(
        h_d=math.sqrt(rho),
        h_c=rho ** (point.alpha / 2),
        h_r=rho ** (point.beta / 2),
        P=1.0,
    )


def exponents_from_gains(params: ChannelParams, rho: float) -> GdofPoint:
    """Inverse of :func:`gains_from_exponents`.

    ``rho`` has to match ``h_d**2 P``; it is passed explicitly so that a
    caller cannot silently anchor the exponents to the wrong SNR.
    """
    if not (rho > 1):
        raise ValueError(f"rho must exceed 1, got {rho!r}")
    if params.h_c == 0 or params.h_r == 0 or params.h_d == 0:
        raise ValueError("exponents are undefined for zero gains")
    if not math.isclose(params.snr, rho, rel_tol=1e-9):
        raise ValueError(f"h_d**2 P = {params.snr!r} does not match rho = {rho!r}")
    log_rho = math.log(rho)
    return GdofPoint(
        alpha=math.log(params.h_c**2 * params.P) / log_rho,
        beta=math.log(params.h_r**2 * params.P) / log_rho,
        rho=rho,
    )


def effective_gains(params: ChannelParams, coeffs: RelayCoefficients) -> EffectiveGains:
    """Composite gains seen by the receivers once the relay cooperates."""
    if coeffs.a1 == 0 or coeffs.a2 == 0:
        raise DivisionGuardError("relay ratios b_j/a_j need a1 != 0 and a2 != 0")
    c1 = coeffs.b1 / coeffs.a1
    c2 = coeffs.b2 / coeffs.a2
    h_d, h_c, h_r = params.h_d, params.h_c, params.h_r
    return EffectiveGains(
        g11=h_d + c1 * h_r,
        g12=h_c + c2 * h_r,
        g21=h_c + c1 * h_r,
        g22=h_d + c2 * h_r,
    )
