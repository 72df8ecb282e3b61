"""Achievable symmetric rates of the five transmission schemes.

Each scheme fixes the source amplitudes and relay weights and produces a
symmetric rate in bits per channel use. Signal components carry power
``P/2`` as in the constructions, so the emitted coefficients always satisfy
``a_j**2 <= 1`` and ``b1**2 + b2**2 <= 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import capacity_c
from .channel import ChannelParams, DivisionGuardError, RelayCoefficients
from .optimize import Domain, OptimizerSettings, maximize

__all__ = [
    "SchemeId",
    "HKDetails",
    "SchemeResult",
    "INTERFERENCE_FLOOR",
    "vsi_rate",
    "zf_relay_cancels",
    "zf_source_scaled",
    "mac_scheme",
    "hk_rate",
    "hk_rate_grid",
    "hk_optimize",
    "all_schemes",
    "best_achievable",
    "scheme_gdof",
    "scheme_gdof_grid",
]

# Below this interference level the HK split is not used; the formula
# divides by I.
INTERFERENCE_FLOOR = 1e-12

_HALF = 1.0 / math.sqrt(2.0)
_LN2 = math.log(2.0)


class SchemeId(enum.IntEnum):
    """Scheme tags; the integer order doubles as the tie-break order."""

    VSI = 0
    ZF_RELAY = 1
    ZF_SOURCE = 2
    MAC = 3
    HK = 4


@dataclass(frozen=True)
class HKDetails:
    S: float
    I: float
    P_w: float
    P_u: float
    a: float
    b: float
    branch: str


@dataclass(frozen=True)
class SchemeResult:
    scheme: SchemeId
    applicable: bool
    sym_rate: float
    coeffs: Optional[RelayCoefficients] = None
    gdof_formula: Optional[float] = None
    hk: Optional[HKDetails] = None
    extras: dict[str, float] = field(default_factory=dict)

    @property
    def sum_rate(self) -> float:
        return 2.0 * self.sym_rate

    def to_dict(self) -> dict:
        out = {
            "scheme": self.scheme.name,
            "applicable": self.applicable,
            "sym_rate": self.sym_rate,
            "sum_rate": self.sum_rate,
            "coeffs": (dict(zip(("a1", "a2", "b1", "b2"), self.coeffs.as_tuple()))
                       if self.coeffs is not None else None),
            "gdof_formula": self.gdof_formula,
        }
        if self.hk is not None:
            out["hk"] = {k: getattr(self.hk, k) for k in ("S", "I", "P_w", "P_u", "a", "b", "branch")}
        if self.extras:
            out["extras"] = dict(self.extras)
        return out


def _exponents(params: ChannelParams):
    """``(alpha, beta)`` of a finite channel, when they are defined."""
    snr = params.snr
    if snr <= 1 or params.h_c == 0 or params.h_r == 0:
        return None
    log_rho = math.log(snr)
    alpha = math.log(params.h_c**2 * params.P) / log_rho
    beta = math.log(params.h_r**2 * params.P) / log_rho
    if alpha < 0 or beta < 0:
        return None
    return alpha, beta


def _gdof(scheme: SchemeId, params: ChannelParams):
    ab = _exponents(params)
    return None if ab is None else scheme_gdof(scheme, *ab)


def _inapplicable(scheme: SchemeId, params: ChannelParams) -> SchemeResult:
    return SchemeResult(scheme, False, 0.0, None, _gdof(scheme, params))


_FULL_COOPERATION = RelayCoefficients(_HALF, _HALF, _HALF, _HALF)


def vsi_rate(params: ChannelParams) -> SchemeResult:
    """Each receiver decodes the interference first, then its own signal."""
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    own = (h_d + h_r) ** 2 * P
    if (h_c + h_r) ** 2 * P < own + own**2 / 2:
        return _inapplicable(SchemeId.VSI, params)
    return SchemeResult(SchemeId.VSI, True, capacity_c(own / 2), _FULL_COOPERATION,
                        _gdof(SchemeId.VSI, params))


def zf_relay_cancels(params: ChannelParams) -> SchemeResult:
    """The relay sends ``-(h_c/h_r)(x1 + x2)`` to cancel the cross links."""
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    if h_c > h_r:
        return _inapplicable(SchemeId.ZF_RELAY, params)
    ratio = h_c / h_r if h_r > 0 else 0.0  # h_r == 0 forces h_c == 0: nothing to cancel
    coeffs = RelayCoefficients(_HALF, _HALF, -ratio * _HALF, -ratio * _HALF)
    rate = capacity_c((h_d - h_c) ** 2 * P / 2)
    return SchemeResult(SchemeId.ZF_RELAY, True, rate, coeffs, _gdof(SchemeId.ZF_RELAY, params))


def zf_source_scaled(params: ChannelParams) -> SchemeResult:
    """The relay sends ``x1 + x2``; the sources send ``-(h_r/h_c) x_j``."""
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    if h_c == 0:
        raise DivisionGuardError("zf_source_scaled needs h_c > 0")
    if h_c < h_r:
        return _inapplicable(SchemeId.ZF_SOURCE, params)
    scale = h_r / h_c
    coeffs = RelayCoefficients(-scale * _HALF, -scale * _HALF, _HALF, _HALF)
    rate = capacity_c((h_d / h_c - 1) ** 2 * h_r**2 * P / 2)
    return SchemeResult(SchemeId.ZF_SOURCE, True, rate, coeffs, _gdof(SchemeId.ZF_SOURCE, params))


def mac_scheme(params: ChannelParams) -> SchemeResult:
    """Both receivers jointly decode both signals.

    The symmetric rate is limited by the joint (sum) constraint and by the
    receiver's own-signal constraint:
    ``min(C(S_d), C(S_d + S_c) / 2)``. Here ``S_d = (h_d + h_r)**2 P/2`` and
    ``S_c = (h_c + h_r)**2 P/2``. The joint constraint alone is kept in
    ``extras["joint_sum_rate"]``.
    """
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    s_d = (h_d + h_r) ** 2 * P / 2
    s_c = (h_c + h_r) ** 2 * P / 2
    joint = capacity_c(s_d + s_c)
    own = capacity_c(s_d)
    return SchemeResult(
        SchemeId.MAC, True, min(own, joint / 2), _FULL_COOPERATION,
        _gdof(SchemeId.MAC, params),
        extras={"joint_sum_rate": joint, "own_rate": own},
    )


def hk_rate_grid(params: ChannelParams, a, b) -> np.ndarray:
    """Vectorized HK symmetric rate over arrays of ``(a, b)``."""
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    S = (a * h_d + b * h_r) ** 2 * P / 2
    I = (a * h_c + b * h_r) ** 2 * P / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        split = np.minimum.reduce([
            np.log1p(I + S / I) / _LN2 - 1,
            0.5 * np.log1p(S + I) / _LN2 + 0.5 * np.log2(2 + S / I) - 1,
            np.log1p(S / 2) / _LN2,
        ])
        tin = np.log1p(S / (1 + I)) / _LN2
    rate = np.where(I >= 1.0, split, tin)
    rate = np.where(I <= INTERFERENCE_FLOOR, np.log1p(S) / _LN2, rate)
    return np.maximum(rate, 0.0)


def hk_rate(params: ChannelParams, a: float, b: float) -> SchemeResult:
    """Han-Kobayashi split with private power at the cross-link noise level.

    Both sources send ``a (w_j + u_j)`` and the relay ``(b/a)(x1 + x2)``,
    with ``P_w + P_u = P/2``. The private power is set so that
    ``(a h_c + b h_r)**2 P_u = 1``. Writing ``S`` for the desired and ``I``
    for the interfering receive power, the symmetric rate is

        min(log2(1 + I + S/I) - 1,
            log2(1 + S + I)/2 + log2(2 + S/I)/2 - 1,
            C(S/2)),

    where the last term is the receiver's own common-plus-private limit.
    When ``I < 1`` that private power would exceed ``P/2``. Everything is
    then sent privately and interference is treated as noise,
    ``C(S/(1 + I))``. At ``I == 0`` this is the interference-free ``C(S)``.
    """
    if not (abs(a) <= 1):
        raise ValueError(f"|a| must not exceed 1, got {a!r}")
    if not (b * b <= 1):
        raise ValueError(f"b**2 must not exceed 1, got {b!r}")
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    S = (a * h_d + b * h_r) ** 2 * P / 2
    I = (a * h_c + b * h_r) ** 2 * P / 2
    if I <= INTERFERENCE_FLOOR:
        branch, P_u = "interference_free", P / 2
    elif I < 1.0:
        branch, P_u = "treat_as_noise", P / 2
    else:
        branch, P_u = "split", P / (2 * I)
    rate = float(hk_rate_grid(params, a, b))
    coeffs = RelayCoefficients(a * _HALF, a * _HALF, b * _HALF, b * _HALF)
    details = HKDetails(S=S, I=I, P_w=P / 2 - P_u, P_u=P_u, a=a, b=b, branch=branch)
    return SchemeResult(SchemeId.HK, True, rate, coeffs, _gdof(SchemeId.HK, params), hk=details)


def hk_optimize(params: ChannelParams, opt: OptimizerSettings | None = None) -> SchemeResult:
    """Best HK rate over ``(a, b)`` in ``[-1, 1]**2``.

    The relay-off point ``(1, 0)`` and, when ``h_r <= h_c``, the
    interference-free point ``(-h_r/h_c, 1)`` are always seeded.
    """
    opt = opt or OptimizerSettings()
    seeds = [(1.0, 0.0)]
    if params.h_c > 0 and params.h_r <= params.h_c:
        seeds.append((-params.h_r / params.h_c, 1.0))
    for s in opt.seed_points:
        # Tied-weight coefficient sets map back to HK's (a, b).
        if s.a1 == s.a2 and s.b1 == s.b2:
            seeds.append((s.a1 / _HALF, s.b1 / _HALF))
    best = maximize(lambda a, b: hk_rate_grid(params, a, b), Domain(box=2), opt, seeds)
    a, b = best.x
    result = hk_rate(params, a, b)
    # Seeds are evaluated after projection, so the exact seed may beat the
    # refined point by rounding only; keep whichever is larger.
    for sa, sb in seeds:
        if abs(sa) <= 1 and sb * sb <= 1:
            candidate = hk_rate(params, sa, sb)
            if candidate.sym_rate > result.sym_rate:
                result = candidate
    return result


def all_schemes(params: ChannelParams, opt: OptimizerSettings | None = None) -> list[SchemeResult]:
    """Results for all five schemes in tag order.

    ``zf_source_scaled`` is undefined for ``h_c == 0`` and then appears as
    inapplicable.
    """
    try:
        zf_src = zf_source_scaled(params)
    except DivisionGuardError:
        zf_src = _inapplicable(SchemeId.ZF_SOURCE, params)
    return [
        vsi_rate(params),
        zf_relay_cancels(params),
        zf_src,
        mac_scheme(params),
        hk_optimize(params, opt),
    ]


def best_achievable(params: ChannelParams, opt: OptimizerSettings | None = None,
                    results: list[SchemeResult] | None = None) -> SchemeResult:
    """The applicable scheme with the largest symmetric rate.

    Exact ties go to the earlier tag (VSI first, HK last).
    """
    results = results if results is not None else all_schemes(params, opt)
    best = None
    for r in results:
        if r.applicable and (best is None or r.sym_rate > best.sym_rate):
            best = r
    return best


def scheme_gdof(scheme: SchemeId, alpha: float, beta: float) -> Optional[float]:
    """Closed-form GDOF of a scheme, or ``None`` where it does not apply.

    The MAC value includes the own-signal limit ``max(1, beta)`` that
    goes with the symmetric rate computed in :func:`mac_scheme`.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    scheme = SchemeId(scheme)
    a, b = float(alpha), float(beta)
    if scheme is SchemeId.VSI:
        return max(1.0, b) if a >= max(2.0, 2 * b) else None
    if scheme is SchemeId.ZF_RELAY:
        return max(1.0, a) if a <= b else None
    if scheme is SchemeId.ZF_SOURCE:
        return max(1 + b - a, b) if a >= b else None
    if scheme is SchemeId.MAC:
        return min(max(1.0, b), 0.5 * max(1.0, a, b))
    if b <= a <= 1:
        return min(max(1 - a / 2, 1 + b - a), max(a, 1 + b - a))
    return None


def scheme_gdof_grid(alpha, beta) -> np.ndarray:
    """Vectorized :func:`scheme_gdof` for all five schemes.

    Returns shape ``(5,) + broadcast_shape`` in tag order, with NaN where a
    scheme does not apply.
    """
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("alpha and beta must be nonnegative")
    a, b = np.broadcast_arrays(a, b)
    nan = np.nan
    vsi = np.where(a >= np.maximum(2.0, 2 * b), np.maximum(1.0, b), nan)
    zf_relay = np.where(a <= b, np.maximum(1.0, a), nan)
    zf_source = np.where(a >= b, np.maximum(1 + b - a, b), nan)
    mac = np.minimum(np.maximum(1.0, b), 0.5 * np.maximum.reduce([np.ones_like(a), a, b]))
    hk = np.where(
        (b <= a) & (a <= 1),
        np.minimum(np.maximum(1 - a / 2, 1 + b - a), np.maximum(a, 1 + b - a)),
        nan,
    )
    return np.stack([vsi, zf_relay, zf_source, mac, hk])
