"""Finite-SNR sum-rate upper bounds.

Every bound is an expression in the gains and in the source and relay
coefficients, maximized over ``a_j**2 <= 1`` and ``b1**2 + b2**2 <= 1``.
Which bounds apply depends on how the cross gain ranks against the direct
and relay gains. The case conditions are strict, so on ``h_c == h_d`` or
``h_c == h_r`` only the single-user bound is used.

Rates are in bits per channel use (``C(x) = log2(1 + x)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import ChannelParams, RelayCoefficients
from .optimize import Domain, OptimizerSettings, maximize

__all__ = [
    "InapplicableRegimeError",
    "BoundValue",
    "BoundReport",
    "ZF_MARGIN",
    "capacity_c",
    "single_user_bound",
    "mac_bound_strong",
    "mac_bound_mixed",
    "z_bound",
    "weak_interference_bound",
    "sum_rate_upper_bound",
    "q_expressions",
]

# Distance kept from the zero-forcing manifold in the first Z sub-case.
ZF_MARGIN = 1e-9

_LN2 = math.log(2.0)


class InapplicableRegimeError(ValueError):
    """The requested bound does not apply to this ordering of the gains."""


def capacity_c(x):
    """``log2(1 + x)``. Accepts scalars or arrays; rejects negative input."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("C(x) needs x >= 0")
    out = np.log1p(arr) / _LN2
    return float(out) if out.ndim == 0 else out


def _c(x):
    # Unchecked vectorized C(x) for objectives; x >= 0 by construction.
    return np.log1p(x) / _LN2


@dataclass(frozen=True)
class BoundValue:
    """One sum-rate bound: its value, the closed-form and optimized parts,
    and the coefficients that attained each optimized part."""

    value: float
    parts: dict[str, float] = field(default_factory=dict)
    argmax: dict[str, RelayCoefficients] = field(default_factory=dict)

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class BoundReport:
    single_user_each: float
    mac_strong: Optional[float] = None
    mac_mixed: Optional[float] = None
    z_bound: Optional[float] = None
    weak_interference: Optional[float] = None
    argmax: dict[str, RelayCoefficients] = field(default_factory=dict)
    sum_rate_min: float = math.nan
    details: dict[str, BoundValue] = field(default_factory=dict, repr=False)

    def sum_rate_bounds(self) -> dict[str, float]:
        out = {"single_user": 2 * self.single_user_each}
        for name in ("mac_strong", "mac_mixed", "z_bound", "weak_interference"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    @property
    def active(self) -> str:
        """Name of the bound that attains ``sum_rate_min``."""
        bounds = self.sum_rate_bounds()
        return min(bounds, key=bounds.get)

    def to_dict(self) -> dict:
        return {
            "single_user_each": self.single_user_each,
            "mac_strong": self.mac_strong,
            "mac_mixed": self.mac_mixed,
            "z_bound": self.z_bound,
            "weak_interference": self.weak_interference,
            "sum_rate_min": self.sum_rate_min,
            "active": self.active,
            "argmax": {k: dict(zip(("a1", "a2", "b1", "b2"), v.as_tuple()))
                       for k, v in self.argmax.items()},
        }


def q_expressions(params: ChannelParams, a1, a2, b1, b2) -> dict[str, np.ndarray]:
    """The eight q-terms at the given coefficients (broadcasting allowed).

    ``q1``..``q3`` use ``a1 = a2 = 1`` by definition. ``q6`` needs
    ``h_c > 0``.
    """
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    g1 = a1 * h_d + b1 * h_r
    g2 = a2 * h_d + b2 * h_r
    k1 = a1 * h_c + b1 * h_r
    k2 = a2 * h_c + b2 * h_r
    out = {
        "q2": (h_d + b1 * h_r) ** 2 * P + (h_c + b2 * h_r) ** 2 * P,
        "q3": (h_d + b2 * h_r) ** 2 * P + (h_c + b1 * h_r) ** 2 * P,
        "q4": g1**2 * P,
        "q5": (h_d + b2 * h_r) ** 2 * P / (1 + k1**2 * P),
        "q7": k2**2 * P + g1**2 * P / (1 + k1**2 * P),
        "q8": k1**2 * P + g2**2 * P / (1 + k2**2 * P),
    }
    if h_c > 0:
        lever = h_r * (1 - h_d / h_c)
        out["q1"] = b1**2 * lever**2 * P + (h_c + b2 * h_r) ** 2 * P
        out["q6"] = b2**2 * lever**2 * P / (1 + k1**2 * P)
    return out


def single_user_bound(params: ChannelParams) -> float:
    """Per-user bound ``C((h_d + h_r)**2 P)``."""
    return capacity_c((params.h_d + params.h_r) ** 2 * params.P)


def _settings(opt):
    return opt if opt is not None else OptimizerSettings()


def _disk_seeds(opt: OptimizerSettings) -> list[tuple[float, float]]:
    """Seeds for the (b1, b2)-only searches, where ``a1 = a2 = 1`` is fixed.

    Each coefficient set contributes its raw relay weights and, when
    feasible, the weights ``b_j / a_j`` that reproduce its effective gains.
    """
    out = []
    for s in opt.seed_points:
        out.append((s.b1, s.b2))
        if s.a1 != 0 and s.a2 != 0:
            r1, r2 = s.b1 / s.a1, s.b2 / s.a2
            if r1 * r1 + r2 * r2 <= 1.0:
                out.append((r1, r2))
    return out


def _mac_terms(params: ChannelParams, opt: OptimizerSettings):
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    lever2 = (h_r * (1 - h_d / h_c)) ** 2

    def m1(b1, b2):
        return _c(b1**2 * lever2 * P + (h_c + b2 * h_r) ** 2 * P)

    def m2(b1, b2):
        q2 = (h_d + b1 * h_r) ** 2 * P + (h_c + b2 * h_r) ** 2 * P
        q3 = (h_d + b2 * h_r) ** 2 * P + (h_c + b1 * h_r) ** 2 * P
        return _c(np.minimum(q2, q3))

    seeds = _disk_seeds(opt)
    best1 = maximize(m1, Domain(disk=True), opt, seeds)
    best2 = maximize(m2, Domain(disk=True), opt, seeds)
    argmax = {
        "M1": RelayCoefficients(1.0, 1.0, *best1.x),
        "M2": RelayCoefficients(1.0, 1.0, *best2.x),
    }
    return best1.value, best2.value, argmax


def mac_bound_strong(params: ChannelParams, opt: OptimizerSettings | None = None) -> BoundValue:
    """Sum-rate bound for ``h_c > max(h_d, h_r)``.

    The larger of the two-sided zero-forcing term
    ``2 C(h_r**2 (1 - h_d/h_c)**2 P)`` and the MAC terms ``M1``, ``M2``.
    """
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    if not h_c > max(h_d, h_r):
        raise InapplicableRegimeError("mac_bound_strong needs h_c > max(h_d, h_r)")
    opt = _settings(opt)
    zf = 2 * capacity_c(h_r**2 * (1 - h_d / h_c) ** 2 * P)
    m1, m2, argmax = _mac_terms(params, opt)
    parts = {"zero_forcing": zf, "M1": m1, "M2": m2}
    return BoundValue(max(parts.values()), parts, argmax)


def mac_bound_mixed(params: ChannelParams, opt: OptimizerSettings | None = None) -> BoundValue:
    """Sum-rate bound for ``h_r > h_c > h_d``; zero-forcing term ``2 C((h_d - h_c)**2 P)``."""
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    if not h_r > h_c > h_d:
        raise InapplicableRegimeError("mac_bound_mixed needs h_r > h_c > h_d")
    opt = _settings(opt)
    zf = 2 * capacity_c((h_d - h_c) ** 2 * P)
    m1, m2, argmax = _mac_terms(params, opt)
    parts = {"zero_forcing": zf, "M1": m1, "M2": m2}
    return BoundValue(max(parts.values()), parts, argmax)


def _z_seeds(opt: OptimizerSettings) -> list[tuple[float, float, float]]:
    return [(s.a1, s.b1, s.b2) for s in opt.seed_points]


def z_bound(params: ChannelParams, opt: OptimizerSettings | None = None) -> BoundValue:
    """Z-channel sum-rate bound for ``h_c < h_d``.

    First sub-case: ``C(q4) + C(q5)`` over ``(a1, b1, b2)`` with both
    composite cross gains kept at least ``ZF_MARGIN`` away from zero.
    Second sub-case: ``C(q4) + C(q6)``, where source 2 zero-forces with
    ``a2 = -b2 h_r / h_c``. Only weights with ``|a2| <= 1`` are searched
    there.
    """
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    if not h_c < h_d:
        raise InapplicableRegimeError("z_bound needs h_c < h_d")
    opt = _settings(opt)
    domain = Domain(box=1, disk=True)

    def first(a1, b1, b2):
        k1 = a1 * h_c + b1 * h_r
        q4 = (a1 * h_d + b1 * h_r) ** 2 * P
        q5 = (h_d + b2 * h_r) ** 2 * P / (1 + k1**2 * P)
        ok = (np.abs(k1) >= ZF_MARGIN) & (np.abs(h_c + b2 * h_r) >= ZF_MARGIN)
        return np.where(ok, _c(q4) + _c(q5), -np.inf)

    def second(a1, b1, b2):
        k1 = a1 * h_c + b1 * h_r
        q4 = (a1 * h_d + b1 * h_r) ** 2 * P
        if h_c > 0:
            a2 = b2 * h_r / h_c
            ok = np.abs(a2) <= 1.0
        else:
            # With no cross link the relay must stay off for source 2 and
            # a2 is then free; take the full amplitude.
            a2 = np.ones_like(b2)
            ok = b2 * h_r == 0
        q6 = a2**2 * (h_d - h_c) ** 2 * P / (1 + k1**2 * P)
        return np.where(ok, _c(q4) + _c(q6), -np.inf)

    seeds = _z_seeds(opt)
    best1 = maximize(first, domain, opt, seeds)
    best2 = maximize(second, domain, opt, seeds)
    a1, b1, b2 = best2.x
    a2 = -b2 * h_r / h_c if h_c > 0 else 1.0
    argmax = {
        "Z1": RelayCoefficients(best1.x[0], 1.0, best1.x[1], best1.x[2]),
        "Z2": RelayCoefficients(a1, float(np.clip(a2, -1.0, 1.0)), b1, b2),
    }
    parts = {"Z1": best1.value, "Z2": best2.value}
    return BoundValue(max(parts.values()), parts, argmax)


def weak_interference_bound(params: ChannelParams, opt: OptimizerSettings | None = None) -> BoundValue:
    """Genie-aided sum-rate bound ``max C(q7) + C(q8)`` for ``h_c < h_d``."""
    h_d, h_c, h_r, P = params.h_d, params.h_c, params.h_r, params.P
    if not h_c < h_d:
        raise InapplicableRegimeError("weak_interference_bound needs h_c < h_d")
    opt = _settings(opt)

    def objective(a1, a2, b1, b2):
        # Per-user factors broadcast small; only the final product is full size.
        t1 = 1 + (a1 * h_c + b1 * h_r) ** 2 * P
        t2 = 1 + (a2 * h_c + b2 * h_r) ** 2 * P
        s1 = (a1 * h_d + b1 * h_r) ** 2 * P / t1
        s2 = (a2 * h_d + b2 * h_r) ** 2 * P / t2
        prod = t2 + s1
        prod = prod * (t1 + s2)
        return np.log2(prod)

    seeds = [s.as_tuple() for s in opt.seed_points]
    best = maximize(objective, Domain(box=2, disk=True), opt, seeds)
    return BoundValue(best.value, {"W": best.value}, {"W": RelayCoefficients(*best.x)})


def sum_rate_upper_bound(params: ChannelParams, opt: OptimizerSettings | None = None) -> BoundReport:
    """Evaluate every applicable bound and take the smallest sum rate."""
    opt = _settings(opt)
    h_d, h_c, h_r = params.h_d, params.h_c, params.h_r
    su = single_user_bound(params)
    details: dict[str, BoundValue] = {}
    if h_c > max(h_d, h_r):
        details["mac_strong"] = mac_bound_strong(params, opt)
    if h_r > h_c > h_d:
        details["mac_mixed"] = mac_bound_mixed(params, opt)
    if h_c < h_d:
        details["z_bound"] = z_bound(params, opt)
        details["weak_interference"] = weak_interference_bound(params, opt)
    argmax = {}
    for name, bound in details.items():
        for part, coeffs in bound.argmax.items():
            argmax[f"{name}.{part}"] = coeffs
    values = [2 * su] + [b.value for b in details.values()]
    return BoundReport(
        single_user_each=su,
        mac_strong=details["mac_strong"].value if "mac_strong" in details else None,
        mac_mixed=details["mac_mixed"].value if "mac_mixed" in details else None,
        z_bound=details["z_bound"].value if "z_bound" in details else None,
        weak_interference=(details["weak_interference"].value
                           if "weak_interference" in details else None),
        argmax=argmax,
        sum_rate_min=min(values),
        details=details,
    )
