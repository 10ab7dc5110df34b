"""Satisfaction utilities and wastage metrics.

A user's satisfaction is a normalized, unimodal function of the ratio
between the achieved rate and the slice requirement.  Writing
``x = rho * r / r_req``, the raw utility is ``(1 - exp(-E(x)))`` with
``E(x) = 1 / (x + x^(1 - xi))``; dividing by the constant ``phi(xi)``
scales the peak to exactly 1.  The peak sits at ``x = (xi - 1)^(1/xi)``,
i.e. slightly above the requirement, and the utility falls off both when
the user is starved and when bandwidth is dumped on it well past its need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def phi(xi: float) -> float:
    """Normalization constant: the raw utility's peak value for elasticity ``xi``."""
    if xi <= 1:
        raise ValueError("xi must be > 1")
    denom = (xi - 1.0) ** (1.0 / xi) + (xi - 1.0) ** ((1.0 - xi) / xi)
    return 1.0 - math.exp(-1.0 / denom)


@dataclass(frozen=True)
class SatisfactionParams:
    """Scaling factor, elasticity and the matching normalization constant."""

    rho: float
    xi: float
    phi: float

    @classmethod
    def from_elasticity(cls, rho: float, xi: float) -> "SatisfactionParams":
        return cls(rho=rho, xi=xi, phi=phi(xi))


def peak_rate(r_req_bps: float, params: SatisfactionParams) -> float:
    """Rate at which the satisfaction reaches its maximum of 1."""
    return r_req_bps * (params.xi - 1.0) ** (1.0 / params.xi) / params.rho


def user_satisfaction(r_bps, r_req_bps, params: SatisfactionParams):
    """Satisfaction in [0, 1] for achieved rate(s) ``r_bps``; 0 at zero rate."""
    x = params.rho * np.asarray(r_bps, dtype=float) / r_req_bps
    with np.errstate(divide="ignore", over="ignore"):
        denom = x + x ** (1.0 - params.xi)
        val = np.where(x > 0, (1.0 - np.exp(-1.0 / np.where(x > 0, denom, 1.0))) / params.phi, 0.0)
    val = np.clip(val, 0.0, 1.0)
    if np.isscalar(r_bps) and val.ndim == 0:
        return float(val)
    return val


def slice_satisfaction(user_sats) -> float:
    """Mean satisfaction over a slice's users."""
    arr = np.asarray(user_sats, dtype=float)
    if arr.size == 0:
        raise ValueError("slice has no users")
    return float(arr.mean())


def system_satisfaction(slice_sats) -> float:
    """Mean satisfaction over slices."""
    arr = np.asarray(slice_sats, dtype=float)
    if arr.size == 0:
        raise ValueError("no slices")
    return float(arr.mean())


def resource_wastage(r_bps, r_req_bps):
    """Wastage ``exp(-r_req / r)`` for rates above the requirement, else 0."""
    r = np.asarray(r_bps, dtype=float)
    with np.errstate(divide="ignore"):
        val = np.where(r > r_req_bps, np.exp(-r_req_bps / np.where(r > 0, r, 1.0)), 0.0)
    if np.isscalar(r_bps) and val.ndim == 0:
        return float(val)
    return val


def slice_wastage(rates_bps, r_req_bps) -> float:
    """Mean per-user wastage over a slice (users at or under requirement count 0)."""
    return float(np.mean(resource_wastage(np.asarray(rates_bps, dtype=float), r_req_bps)))
