"""Comparison allocators.

The iterative baseline plans from instantaneous channel knowledge: it
computes, per user, the exact bandwidth that hits the rate requirement
(bisection on the Shannon curve), grants each slice its aggregate need capped
at a contracted share of the cell, then iteratively hands unused capacity
to slices with unmet demand in proportion to that demand.  The WIC helper
just runs the learned stack with the isolation checks disabled
(see ``env.make_wic_env``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import data_rate_bps
from .config import ScenarioConfig

_REL_TOL = 1e-9
_MAX_BISECT = 200
_MAX_ROUNDS = 20
_ROUND_TOL = 1e-6


def bandwidth_for_rate(target_bps: float, gain: float, p_w: float, n0_w_hz: float,
                       bw_cap_hz: float) -> float | None:
    """Bandwidth (Hz) at which the Shannon rate equals ``target_bps``.

    The rate grows monotonically in bandwidth but saturates at
    ``p * g / (n0 * ln 2)``; targets at or above the cap rate are
    unreachable and yield None.
    """
    if target_bps <= 0:
        return 0.0

    def rate(bw: float) -> float:
        return bw * math.log2(1.0 + p_w * gain / (bw * n0_w_hz))

    if rate(bw_cap_hz) < target_bps:
        return None
    lo = 0.0
    hi = bw_cap_hz
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        if mid <= 0:
            break
        r = rate(mid)
        if abs(r - target_bps) <= _REL_TOL * target_bps:
            return mid
        if r < target_bps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DemandAllocation:
    inter_fractions: np.ndarray
    intra_fractions: list[np.ndarray]
    demand_hz: np.ndarray
    rounds: int
    shortfall: bool


def rssi_ip_allocate(gains: list[np.ndarray], config: ScenarioConfig,
                     contracted_users: tuple[int, ...] | None = None) -> DemandAllocation:
    """Demand-driven two-stage split for the current channel draw.

    Contracted shares are proportional to each slice's contracted aggregate
    rate (contracted user count times rate requirement).  Users whose
    requirement is unreachable even with the whole cell count as demanding
    the whole cell; if total demand still exceeds supply after
    redistribution, the final grants ration the cell proportionally to
    demand and the allocation is flagged as a shortfall.
    """
    w = config.total_bandwidth_hz
    n = config.num_slices
    if contracted_users is None:
        contracted_users = tuple(spec.num_users for spec in config.slice_specs)
    needs: list[np.ndarray] = []
    demand = np.zeros(n)
    for s, spec in enumerate(config.slice_specs):
        g = np.asarray(gains[s], dtype=float)
        need = np.empty(g.size)
        for i, gain in enumerate(g):
            bw = bandwidth_for_rate(
                spec.rate_requirement_bps, float(gain), config.tx_power_w,
                config.noise_density_w_per_hz, w,
            )
            need[i] = w if bw is None else bw
        needs.append(need)
        demand[s] = float(need.sum())

    weights = np.array(
        [c * spec.rate_requirement_bps for c, spec in zip(contracted_users, config.slice_specs)]
    )
    shares = w * weights / weights.sum()
    grants = np.minimum(demand, shares)
    rounds = 0
    for rounds in range(1, _MAX_ROUNDS + 1):
        unmet = demand - grants
        pool = w - float(grants.sum())
        total_unmet = float(unmet.sum())
        if pool <= _ROUND_TOL * w or total_unmet <= _ROUND_TOL * w:
            break
        add = np.minimum(unmet, pool * unmet / total_unmet)
        grants = grants + add
        if float(add.sum()) < _ROUND_TOL * w:
            break

    shortfall = float((demand - grants).sum()) > _ROUND_TOL * w
    if shortfall and demand.sum() > 0:
        grants = w * demand / demand.sum()

    intra = []
    for s in range(n):
        if demand[s] > 0:
            intra.append(needs[s] / demand[s])
        else:
            intra.append(np.zeros(needs[s].size))
    return DemandAllocation(
        inter_fractions=grants / w,
        intra_fractions=intra,
        demand_hz=demand,
        rounds=rounds,
        shortfall=shortfall,
    )
